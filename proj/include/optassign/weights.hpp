#pragma once

// Weight-transform functions, their validation, and rank/weight matrices over
// the vacant-seat expansion.
//
// A weight function w maps ranks [1, z] to nonnegative integers. To make the
// maximum-weight assignment coincide with the stable utility-maximal matching
// it must satisfy: whenever r(s,h) < r(s,h') and r(s,h) < r(s',h),
// w(s,h) > w(s',h) + w(s,h'). Over rank-valued functions this reduces to the
// adjacent-rank condition checked by validate_weight_fn (see there).

#include <cstdint>
#include <string>
#include <vector>

#include "optassign/error.hpp"
#include "optassign/model.hpp"

namespace optassign {

enum class WeightKind {
  exp_minus_one,  // w(r) = 2^(z-r) - 1, the default
  power_base,     // w(r) = (n_students+1)^(z-r)
  custom,         // explicit table, used by validation tests
};

const char* to_string(WeightKind kind) noexcept;
WeightKind weight_kind_from_string(const std::string& name);  // INVALID_WEIGHT_FN

/// A weight function materialized as a table over ranks [1, z].
class WeightFn {
 public:
  static WeightFn exp_minus_one(int z);                       // Z_TOO_LARGE if z > 63
  static WeightFn power_base(int z, std::size_t n_students);  // WEIGHT_OVERFLOW
  static WeightFn make(WeightKind kind, int z, std::size_t n_students);
  /// Arbitrary table, mainly for validation tests; table[k-1] = w(k).
  static WeightFn from_table(std::vector<std::uint64_t> table);

  WeightKind kind() const { return kind_; }
  int z() const { return static_cast<int>(table_.size()); }
  std::uint64_t operator()(int rank) const { return table_[static_cast<std::size_t>(rank - 1)]; }
  const std::vector<std::uint64_t>& table() const { return table_; }

 private:
  WeightFn(WeightKind kind, std::vector<std::uint64_t> table)
      : kind_(kind), table_(std::move(table)) {}
  WeightKind kind_;
  std::vector<std::uint64_t> table_;  // index k-1 holds w(k)
};

/// Result of checking the adjacent-rank condition; `rank` is the first k with
/// w(k) <= 2 w(k+1) when not ok.
struct WeightValidation {
  bool ok = true;
  int rank = 0;
};

/// Checks w(k) > 2 w(k+1) for all k in [1, z-1] (w(z) >= 0 holds for unsigned
/// values). This is equivalent to the full pair condition above: taking both
/// deeper ranks equal to k+1 shows necessity, and since a valid w is strictly
/// decreasing, any pair of deeper ranks sums to at most 2 w(k+1) < w(k),
/// giving sufficiency.
WeightValidation validate_weight_fn(const WeightFn& fn);

/// Preference ranks over the vacant-seat expansion: one row per student, one
/// column per seat; a seat inherits the rank of its owning school.
class RankMatrix {
 public:
  RankMatrix(std::size_t rows, std::size_t cols, int z,
             std::vector<std::uint16_t> entries, std::vector<std::size_t> seat_to_school);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int z() const { return z_; }
  std::uint16_t operator()(std::size_t row, std::size_t col) const {
    return entries_[row * cols_ + col];
  }
  /// School (by index in the source instance) owning seat column `col`.
  std::size_t seat_school(std::size_t col) const { return seat_to_school_[col]; }

 private:
  std::size_t rows_, cols_;
  int z_;
  std::vector<std::uint16_t> entries_;
  std::vector<std::size_t> seat_to_school_;
};

/// Builds the rank matrix for an instance. Seats are ordered by school
/// declaration order, then seat 0..capacity-1 within a school. Throws
/// INCOMPLETE_PREFERENCES if any (student, school) pair is unranked.
RankMatrix build_rank_matrix(const Instance& instance);

/// Weights over the same shape, stored as the rank matrix plus the weight
/// table; entries are computed on access. Keeps the 10^4 x 10^4 case at two
/// bytes per cell instead of eight.
class WeightMatrix {
 public:
  WeightMatrix(RankMatrix ranks, WeightFn fn);

  std::size_t rows() const { return ranks_.rows(); }
  std::size_t cols() const { return ranks_.cols(); }
  std::uint64_t operator()(std::size_t row, std::size_t col) const {
    return fn_(ranks_(row, col));
  }
  /// Upper bound on entries, used by the solver for the cost transform.
  std::uint64_t max_value() const { return ranks_.z() > 0 ? fn_(1) : 0; }
  const RankMatrix& ranks() const { return ranks_; }
  const WeightFn& fn() const { return fn_; }

 private:
  RankMatrix ranks_;
  WeightFn fn_;
};

/// Applies the weight function elementwise. Throws INVALID_WEIGHT_FN when the
/// function fails validation or its z does not cover the matrix, and
/// WEIGHT_OVERFLOW when rows * w(1) would overflow the signed 64-bit
/// accumulator the solver sums weights in.
WeightMatrix build_weight_matrix(RankMatrix ranks, WeightFn fn);

}  // namespace optassign
