#include "optassign/lapsolve.hpp"

#include "optassign/weights.hpp"

namespace optassign {

// Pre-instantiate the solver for the two matrix types used in production so
// client translation units stay lean.
template Assignment max_weight_assignment<DenseMatrix>(const DenseMatrix&, std::uint64_t);
template Assignment max_weight_assignment<WeightMatrix>(const WeightMatrix&, std::uint64_t);

}  // namespace optassign
