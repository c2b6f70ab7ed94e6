#include "optassign/weights.hpp"

#include <limits>

namespace optassign {

const char* to_string(WeightKind kind) noexcept {
  switch (kind) {
    case WeightKind::exp_minus_one: return "exp-minus-one";
    case WeightKind::power_base: return "power-base";
    case WeightKind::custom: return "custom";
  }
  return "?";
}

WeightKind weight_kind_from_string(const std::string& name) {
  if (name == "exp-minus-one") return WeightKind::exp_minus_one;
  if (name == "power-base") return WeightKind::power_base;
  throw Error(ErrorCode::invalid_weight_fn, "unknown weight function '" + name + "'");
}

WeightFn WeightFn::exp_minus_one(int z) {
  if (z < 1) throw Error(ErrorCode::invalid_weight_fn, "z must be >= 1");
  if (z > 63)
    throw Error(ErrorCode::z_too_large,
                "z = " + std::to_string(z) + " overflows 2^(z-1) - 1 in 64 bits");
  std::vector<std::uint64_t> table(static_cast<std::size_t>(z));
  for (int k = 1; k <= z; ++k)
    table[static_cast<std::size_t>(k - 1)] = (std::uint64_t{1} << (z - k)) - 1;
  return WeightFn(WeightKind::exp_minus_one, std::move(table));
}

WeightFn WeightFn::power_base(int z, std::size_t n_students) {
  if (z < 1) throw Error(ErrorCode::invalid_weight_fn, "z must be >= 1");
  const std::uint64_t base = static_cast<std::uint64_t>(n_students) + 1;
  const std::uint64_t limit = std::uint64_t{1} << 63;
  std::vector<std::uint64_t> table(static_cast<std::size_t>(z));
  std::uint64_t value = 1;
  for (int k = z; k >= 1; --k) {
    table[static_cast<std::size_t>(k - 1)] = value;
    if (k > 1) {
      if (base != 0 && value > (limit - 1) / base)
        throw Error(ErrorCode::weight_overflow,
                    "(" + std::to_string(base) + ")^" + std::to_string(z - k + 1) +
                        " exceeds the 64-bit weight domain");
      value *= base;
    }
  }
  return WeightFn(WeightKind::power_base, std::move(table));
}

WeightFn WeightFn::make(WeightKind kind, int z, std::size_t n_students) {
  switch (kind) {
    case WeightKind::exp_minus_one: return exp_minus_one(z);
    case WeightKind::power_base: return power_base(z, n_students);
    case WeightKind::custom: break;
  }
  throw Error(ErrorCode::invalid_weight_fn, "unknown weight kind");
}

WeightFn WeightFn::from_table(std::vector<std::uint64_t> table) {
  if (table.empty()) throw Error(ErrorCode::invalid_weight_fn, "empty weight table");
  return WeightFn(WeightKind::custom, std::move(table));
}

WeightValidation validate_weight_fn(const WeightFn& fn) {
  const auto& table = fn.table();
  for (std::size_t k = 0; k + 1 < table.size(); ++k) {
    // w(k) > 2 w(k+1), with the doubling done in 128 bits to dodge wraparound.
    if (static_cast<unsigned __int128>(table[k]) <=
        2 * static_cast<unsigned __int128>(table[k + 1]))
      return {false, static_cast<int>(k + 1)};
  }
  return {true, 0};
}

RankMatrix::RankMatrix(std::size_t rows, std::size_t cols, int z,
                       std::vector<std::uint16_t> entries,
                       std::vector<std::size_t> seat_to_school)
    : rows_(rows), cols_(cols), z_(z), entries_(std::move(entries)),
      seat_to_school_(std::move(seat_to_school)) {
  if (entries_.size() != rows_ * cols_ || seat_to_school_.size() != cols_)
    throw Error(ErrorCode::shape_error, "rank matrix shape mismatch");
}

RankMatrix build_rank_matrix(const Instance& instance) {
  const std::size_t rows = instance.n_students();
  const std::size_t cols = instance.total_capacity();
  std::vector<std::size_t> seat_to_school;
  seat_to_school.reserve(cols);
  for (std::size_t h = 0; h < instance.n_schools(); ++h)
    for (int seat = 0; seat < instance.schools()[h].capacity; ++seat)
      seat_to_school.push_back(h);

  std::vector<std::uint16_t> entries(rows * cols);
  for (std::size_t s = 0; s < rows; ++s) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::uint16_t r = instance.rank_or_zero(s, seat_to_school[c]);
      if (r == 0)
        throw Error(ErrorCode::incomplete_preferences,
                    "student '" + instance.students()[s].id + "' does not rank school '" +
                        instance.schools()[seat_to_school[c]].id + "'");
      entries[s * cols + c] = r;
    }
  }
  return RankMatrix(rows, cols, instance.z(), std::move(entries), std::move(seat_to_school));
}

WeightMatrix::WeightMatrix(RankMatrix ranks, WeightFn fn)
    : ranks_(std::move(ranks)), fn_(std::move(fn)) {}

WeightMatrix build_weight_matrix(RankMatrix ranks, WeightFn fn) {
  if (fn.z() != ranks.z())
    throw Error(ErrorCode::invalid_weight_fn,
                "weight function covers z = " + std::to_string(fn.z()) +
                    " but the rank matrix has z = " + std::to_string(ranks.z()));
  WeightValidation validation = validate_weight_fn(fn);
  if (!validation.ok)
    throw Error(ErrorCode::invalid_weight_fn,
                "w(" + std::to_string(validation.rank) + ") <= 2 w(" +
                    std::to_string(validation.rank + 1) + ")");
  if (ranks.z() > 0) {
    // The solver accumulates at most `rows` weights in a signed 64-bit sum.
    unsigned __int128 bound =
        static_cast<unsigned __int128>(ranks.rows()) * fn(1);
    if (bound >= (static_cast<unsigned __int128>(1) << 63))
      throw Error(ErrorCode::weight_overflow,
                  "rows * w(1) exceeds the 64-bit accumulator");
  }
  return WeightMatrix(std::move(ranks), std::move(fn));
}

}  // namespace optassign
