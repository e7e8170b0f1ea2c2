#pragma once

// Internal solver loop shared by solve_cgm and solve_hybrid.

#include "cgmin/cubic.hpp"

namespace cgmin::detail {

enum class Variant { NoPowell, Powell, Hybrid };

struct DriverHooks {
  // When set, the run stops as soon as the Powell criterion fires and the
  // surrounding state is stored here instead of being acted on.
  SolverState* capture = nullptr;
  bool* captured = nullptr;
};

SolveReport run_driver(const Problem& problem, const DenseVector& x0,
                       const SolveOptions& opts, Variant variant,
                       const CubicOptions& copts, DriverHooks hooks = {});

} // namespace cgmin::detail
