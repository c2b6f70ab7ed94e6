#pragma once

// Correctness oracles: weak-stability checking under symmetric preferences,
// exhaustive enumeration of complete matchings, and brute-force optima for
// small inputs. All exponential-cost entry points guard their input size.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "optassign/lapsolve.hpp"
#include "optassign/model.hpp"

namespace optassign {

/// A student and a school that would both rather be matched with each other:
/// the student strictly prefers the school over their assignment, and the
/// school either has a free seat or holds a student it ranks strictly worse
/// (under symmetric preferences the school ranks student s at r(s, h)).
/// `displaced` names the worst-ranked such occupant (smallest id on ties) and
/// is empty when a seat is free.
struct BlockingPair {
  StudentId student;
  SchoolId school;
  std::optional<StudentId> displaced;
  bool operator==(const BlockingPair&) const = default;
};

struct StabilityResult {
  bool stable = true;
  std::vector<BlockingPair> blocking;  // sorted by (student, school)
};

StabilityResult is_weakly_stable(const Instance& instance, const Matching& matching);

/// Calls `visit` once for every capacity-respecting complete matching, in a
/// deterministic order; stops early when `visit` returns false. Guarded by
/// total capacity <= 9 (INSTANCE_TOO_LARGE) since the count grows
/// factorially.
void enumerate_complete_matchings(const Instance& instance,
                                  const std::function<bool(const Matching&)>& visit);

/// The lexicographically maximal utility profile over all complete matchings,
/// with every matching attaining it.
struct OracleOptimum {
  UtilityProfile profile;
  std::vector<Matching> witnesses;
};

OracleOptimum oracle_student_optimal(const Instance& instance);

/// Exact maximum assignment total with all attaining assignments, by
/// exhaustive search. Guarded by rows <= cols <= 9.
struct OracleMaxWeight {
  std::uint64_t total = 0;
  std::vector<Assignment> witnesses;
};

template <class Matrix>
OracleMaxWeight oracle_max_weight(const Matrix& matrix) {
  const std::size_t nr = matrix.rows();
  const std::size_t nc = matrix.cols();
  if (nr > nc)
    throw Error(ErrorCode::shape_error, "more rows than columns");
  if (nc > 9)
    throw Error(ErrorCode::instance_too_large,
                "brute-force assignment search is limited to 9 columns");
  OracleMaxWeight best;
  if (nr == 0) {
    best.witnesses.push_back({});
    return best;
  }
  std::vector<std::size_t> chosen(nr, 0);
  std::vector<char> used(nc, 0);
  bool any = false;
  auto recurse = [&](auto&& self, std::size_t row, std::uint64_t total) -> void {
    if (row == nr) {
      if (!any || total > best.total) {
        any = true;
        best.total = total;
        best.witnesses.clear();
      }
      if (total == best.total) best.witnesses.push_back({chosen, total});
      return;
    }
    for (std::size_t j = 0; j < nc; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      chosen[row] = j;
      self(self, row + 1, total + matrix(row, j));
      used[j] = 0;
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

}  // namespace optassign
