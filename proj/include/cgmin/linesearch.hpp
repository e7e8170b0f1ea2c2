#pragma once

#include "cgmin/problems.hpp"
#include "cgmin/vec.hpp"

namespace cgmin {

/// Constants for the Strong Wolfe search. The defaults are the usual
/// CG-safe pair; `near_exact()` matches runs that effectively minimize the
/// one-dimensional function, `exact()` drives |phi'(alpha)| to roundoff and
/// is intended for quadratic reproduction tests.
struct LineSearchParams {
  double c1 = 1e-4;       ///< sufficient-decrease constant, 0 < c1 < c2 < 1
  double c2 = 0.9;        ///< curvature constant
  double alpha_init = 1.0;
  int max_trials = 40;    ///< function-evaluation budget
  double alpha_max = 1e10;

  static LineSearchParams wolfe() { return {}; }
  static LineSearchParams near_exact() {
    LineSearchParams p;
    p.c2 = 0.1;
    return p;
  }
  static LineSearchParams exact() {
    LineSearchParams p;
    p.c1 = 1e-12;
    p.c2 = 1e-10;
    p.max_trials = 100;
    return p;
  }
};

enum class LineSearchStatus {
  Success,
  NotDescent,        ///< g(x)'dx >= 0 on entry
  Failure,           ///< budget exhausted without a Strong Wolfe point
};

struct LineSearchResult {
  LineSearchStatus status = LineSearchStatus::Failure;
  double alpha = 0.0;
  double f_new = 0.0;
  DenseVector g_new;
  int evals = 0;      ///< objective evaluations
  int grad_evals = 0; ///< gradient evaluations (paired with objective here)
};

/// Finds alpha > 0 satisfying
///   f(x + a dx) <= f0 + c1 a g0'dx   and   |g(x + a dx)'dx| <= c2 |g0'dx|
/// by bracketing plus safeguarded cubic interpolation. `f0`, `g0` are the
/// objective and gradient at `x`. A successful result always has
/// (a dx)'(g_new - g0) > 0, the curvature condition the solver relies on.
LineSearchResult line_search(const Problem& problem, const DenseVector& x,
                             const DenseVector& dx, double f0,
                             const DenseVector& g0,
                             const LineSearchParams& params);

} // namespace cgmin
