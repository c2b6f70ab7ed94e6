#pragma once

// Maximum-weight assignment for rectangular integer matrices via successive
// shortest augmenting paths (the Jonker-Volgenant family), O(n^3) worst case.
//
// The matrix concept: rows(), cols(), operator()(row, col) -> uint64_t, and
// max_value() -> an upper bound on all entries. Maximization is turned into
// minimization with nonnegative costs cost = max_value() - weight; duals and
// path lengths stay in int64 and every candidate distance is computed in 128
// bits, so results are exact (no floating point anywhere).

#include <cstdint>
#include <limits>
#include <vector>

#include "optassign/error.hpp"
#include "optassign/rng.hpp"

namespace optassign {

struct Assignment {
  std::vector<std::size_t> row_to_col;
  std::uint64_t total_weight = 0;
  bool operator==(const Assignment&) const = default;
};

/// Plain row-major matrix for tests and oracles.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0) {}
  DenseMatrix(std::initializer_list<std::initializer_list<std::uint64_t>> rows)
      : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    for (const auto& row : rows) {
      if (row.size() != cols_) throw Error(ErrorCode::shape_error, "ragged rows");
      for (std::uint64_t v : row) values_.push_back(v);
    }
    for (std::uint64_t v : values_) max_ = std::max(max_, v);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint64_t operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  std::uint64_t max_value() const { return max_; }
  void set(std::size_t r, std::size_t c, std::uint64_t v) {
    values_[r * cols_ + c] = v;
    max_ = std::max(max_, v);
  }

 private:
  std::size_t rows_, cols_;
  std::vector<std::uint64_t> values_;
  std::uint64_t max_ = 0;
};

namespace detail {

/// One augmenting-path search (Dijkstra over reduced costs) starting from
/// `cur_row`. Returns the free column reached; fills shortest/path/SR/SC and
/// leaves the path length in min_val.
template <class Cost>
std::size_t augmenting_path(const Cost& cost, std::size_t cur_row, std::size_t nc,
                            std::vector<std::int64_t>& u, std::vector<std::int64_t>& v,
                            std::vector<std::size_t>& path,
                            std::vector<std::size_t>& row4col,
                            std::vector<std::int64_t>& shortest,
                            std::vector<char>& sr, std::vector<char>& sc,
                            std::vector<std::size_t>& remaining,
                            std::int64_t& min_val) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  min_val = 0;
  std::size_t num_remaining = nc;
  // Reverse initial order so that on an all-equal matrix the identity
  // assignment falls out; with the seed permutation applied on top this only
  // fixes which optimum a given seed denotes.
  for (std::size_t it = 0; it < nc; ++it) remaining[it] = nc - it - 1;
  std::fill(sr.begin(), sr.end(), 0);
  std::fill(sc.begin(), sc.end(), 0);
  std::fill(shortest.begin(), shortest.end(), kInf);

  std::size_t sink = kNone;
  std::size_t i = cur_row;
  while (sink == kNone) {
    std::size_t index = kNone;
    std::int64_t lowest = kInf;
    sr[i] = 1;
    const __int128 base = static_cast<__int128>(min_val) - u[i];
    for (std::size_t it = 0; it < num_remaining; ++it) {
      std::size_t j = remaining[it];
      __int128 r = base + cost(i, j) - v[j];
      // The 128-bit compare keeps candidates at or above the sentinel out;
      // any column that matters is popped below 2^63 (the accumulator bound
      // caps real path lengths), so dropping them cannot change the result.
      if (r < shortest[j]) {
        path[j] = i;
        shortest[j] = static_cast<std::int64_t>(r);
      }
      // On ties prefer a free column so the search can stop; with few
      // distinct weights ties are the common case.
      if (shortest[j] < lowest || (shortest[j] == lowest && row4col[j] == kNone)) {
        lowest = shortest[j];
        index = it;
      }
    }
    min_val = lowest;
    if (min_val == kInf)
      throw Error(ErrorCode::shape_error, "no augmenting path (unassignable row)");
    std::size_t j = remaining[index];
    if (row4col[j] == kNone)
      sink = j;
    else
      i = row4col[j];
    sc[j] = 1;
    remaining[index] = remaining[--num_remaining];
  }
  return sink;
}

}  // namespace detail

/// Maximum-weight injective row -> column assignment. Deterministic per
/// (matrix, seed); the seed only picks among equally-optimal assignments (the
/// rows and columns are solved in a seed-derived order, which preserves the
/// optimal total). Throws SHAPE_ERROR when rows > cols and WEIGHT_OVERFLOW
/// when rows * max_value() would overflow the signed 64-bit accumulator.
template <class Matrix>
Assignment max_weight_assignment(const Matrix& matrix, std::uint64_t seed) {
  const std::size_t nr = matrix.rows();
  const std::size_t nc = matrix.cols();
  if (nr > nc)
    throw Error(ErrorCode::shape_error,
                std::to_string(nr) + " rows cannot be assigned to " +
                    std::to_string(nc) + " columns");
  Assignment result;
  if (nr == 0) return result;

  const std::uint64_t max_w = matrix.max_value();
  if (static_cast<unsigned __int128>(nr) * max_w >=
      (static_cast<unsigned __int128>(1) << 63))
    throw Error(ErrorCode::weight_overflow, "rows * max weight exceeds 64-bit accumulator");

  const std::vector<std::size_t> row_perm = seeded_permutation(nr, mix_seed(seed, "row-order"));
  const std::vector<std::size_t> col_perm = seeded_permutation(nc, mix_seed(seed, "col-order"));
  auto cost = [&](std::size_t i, std::size_t j) -> std::int64_t {
    return static_cast<std::int64_t>(max_w - matrix(row_perm[i], col_perm[j]));
  };

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::int64_t> u(nr, 0), v(nc, 0), shortest(nc);
  std::vector<std::size_t> path(nc, kNone), remaining(nc);
  std::vector<std::size_t> col4row(nr, kNone), row4col(nc, kNone);
  std::vector<char> sr(nr), sc(nc);

  for (std::size_t cur_row = 0; cur_row < nr; ++cur_row) {
    std::int64_t min_val = 0;
    std::size_t sink = detail::augmenting_path(cost, cur_row, nc, u, v, path, row4col,
                                               shortest, sr, sc, remaining, min_val);
    u[cur_row] += min_val;
    for (std::size_t i = 0; i < nr; ++i)
      if (sr[i] && i != cur_row) u[i] += min_val - shortest[col4row[i]];
    for (std::size_t j = 0; j < nc; ++j)
      if (sc[j]) v[j] -= min_val - shortest[j];

    std::size_t j = sink;
    while (true) {
      std::size_t i = path[j];
      row4col[j] = i;
      std::swap(col4row[i], j);
      if (i == cur_row) break;
    }
  }

  result.row_to_col.assign(nr, 0);
  for (std::size_t i = 0; i < nr; ++i)
    result.row_to_col[row_perm[i]] = col_perm[col4row[i]];
  for (std::size_t i = 0; i < nr; ++i) {
    std::uint64_t w = matrix(i, result.row_to_col[i]);
    if (__builtin_add_overflow(result.total_weight, w, &result.total_weight))
      throw Error(ErrorCode::weight_overflow, "total weight overflow");
  }
  return result;
}

}  // namespace optassign
