#pragma once

// End-to-end assignment mechanisms: the student-optimal pipeline (vacant-seat
// expansion -> rank matrix -> weight matrix -> maximum-weight assignment ->
// seat collapse) and the two lottery baselines.

#include <cstdint>
#include <vector>

#include "optassign/model.hpp"
#include "optassign/weights.hpp"

namespace optassign {

/// Unit-capacity seats in deterministic order: schools in declaration order,
/// seats 0..capacity-1 within each school.
struct VacantSeatTable {
  std::vector<std::size_t> seat_to_school;  // seat index -> school index
};

VacantSeatTable expand_vacant_seats(const Instance& instance);

/// A serial order over all students drawn from a seed.
struct Lottery {
  std::vector<StudentId> order;
  std::uint64_t seed = 0;
};

/// Applies a seeded permutation to the students in declaration order.
Lottery draw_lottery(const Instance& instance, std::uint64_t seed);

/// Breaks every tie-group into singletons. Each student's groups are shuffled
/// with an engine seeded from (lottery.seed, student id), so the result does
/// not depend on the order students are listed in.
Instance tiebreak_preferences(const Instance& instance, const Lottery& lottery);

/// The stable matching with the lexicographically maximal utility profile.
/// Deterministic per (instance, weight function, seed); the seed picks among
/// equally-optimal matchings only.
Matching student_optimal_matching(const Instance& instance, WeightKind weight_kind,
                                  std::uint64_t seed);

/// In lottery order, each student takes the best-ranked school with a free
/// seat. Requires strict preferences. Equivalent to student-proposing
/// deferred acceptance when every school's priority is the single lottery.
Matching baseline_serial_dictatorship(const Instance& strict_instance, const Lottery& lottery);

/// Immediate acceptance in rounds: in round k every unassigned student
/// applies to the k-th school on their list; schools with free seats admit
/// applicants in lottery order up to capacity, irrevocably.
Matching baseline_boston_rounds(const Instance& strict_instance, const Lottery& lottery);

}  // namespace optassign
