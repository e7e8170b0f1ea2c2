#include "cgmin/linesearch.hpp"

#include <cmath>
#include <stdexcept>

namespace cgmin {

namespace {

// Minimizer of the cubic through (a, fa, da) and (b, fb, db); NaN when the
// interpolant has no interior minimum.
double cubic_min(double a, double fa, double da, double b, double fb,
                 double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  return b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
}

struct Trial {
  double alpha, phi, dphi;
  bool finite;
};

class Phi {
 public:
  Phi(const Problem& problem, const DenseVector& x, const DenseVector& dx)
      : problem_(problem), x_(x), dx_(dx),
        x_trial_(x.size()), g_trial_(x.size()) {}

  Trial operator()(double alpha) {
    for (std::size_t i = 0; i < x_.size(); ++i)
      x_trial_[i] = x_[i] + alpha * dx_[i];
    ++evals_;
    double f;
    try {
      f = problem_.value_grad(x_trial_, g_trial_);
    } catch (...) {
      return {alpha, 0.0, 0.0, false};
    }
    if (!std::isfinite(f) || !vec::all_finite(g_trial_))
      return {alpha, f, 0.0, false};
    return {alpha, f, vec::dot(g_trial_, dx_), true};
  }

  int evals() const { return evals_; }
  DenseVector take_gradient() { return std::move(g_trial_); }

 private:
  const Problem& problem_;
  const DenseVector& x_;
  const DenseVector& dx_;
  DenseVector x_trial_, g_trial_;
  int evals_ = 0;
};

} // namespace

LineSearchResult line_search(const Problem& problem, const DenseVector& x,
                             const DenseVector& dx, double f0,
                             const DenseVector& g0,
                             const LineSearchParams& params) {
  if (!(0.0 < params.c1 && params.c1 < params.c2 && params.c2 < 1.0))
    throw std::invalid_argument("line_search: need 0 < c1 < c2 < 1");
  if (params.max_trials < 1 || !(params.alpha_max > 0.0))
    throw std::invalid_argument("line_search: bad budget or alpha_max");

  LineSearchResult result;
  const double dphi0 = vec::dot(g0, dx);
  if (dphi0 >= 0.0) {
    result.status = LineSearchStatus::NotDescent;
    return result;
  }
  const double armijo_slope = params.c1 * dphi0;
  const double curv_bound = params.c2 * std::abs(dphi0);

  Phi phi(problem, x, dx);
  auto finish = [&](const Trial& t) {
    result.status = LineSearchStatus::Success;
    result.alpha = t.alpha;
    result.f_new = t.phi;
    result.g_new = phi.take_gradient();
    result.evals = result.grad_evals = phi.evals();
    return result;
  };
  auto fail = [&]() {
    result.status = LineSearchStatus::Failure;
    result.evals = result.grad_evals = phi.evals();
    return result;
  };
  auto armijo_ok = [&](const Trial& t) {
    return t.finite && t.phi <= f0 + t.alpha * armijo_slope;
  };

  // Zoom phase: lo satisfies Armijo and has the lowest value seen;
  // dphi(lo) * (hi - lo) < 0 keeps a Wolfe point inside the interval.
  auto zoom = [&](Trial lo, Trial hi) {
    int stall = 0;
    while (phi.evals() < params.max_trials) {
      const double w = std::abs(hi.alpha - lo.alpha);
      if (w <= 1e-14 * std::max(1.0, std::abs(lo.alpha))) return fail();
      double a = std::numeric_limits<double>::quiet_NaN();
      if (stall < 2 && hi.finite)
        a = cubic_min(lo.alpha, lo.phi, lo.dphi, hi.alpha, hi.phi, hi.dphi);
      const double a_min = std::min(lo.alpha, hi.alpha) + 1e-3 * w;
      const double a_max = std::max(lo.alpha, hi.alpha) - 1e-3 * w;
      if (!std::isfinite(a) || a < a_min || a > a_max) {
        a = 0.5 * (lo.alpha + hi.alpha);
        stall = 0;
      }
      const Trial t = phi(a);
      if (!armijo_ok(t) || t.phi >= lo.phi) {
        hi = t;
      } else {
        if (std::abs(t.dphi) <= curv_bound) return finish(t);
        if (t.dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = t;
      }
      stall = (std::abs(hi.alpha - lo.alpha) > 0.66 * w) ? stall + 1 : 0;
    }
    return fail();
  };

  Trial prev{0.0, f0, dphi0, true};
  double alpha = std::min(std::max(params.alpha_init, 0.0), params.alpha_max);
  if (alpha == 0.0) alpha = 1.0;
  bool first = true;
  while (phi.evals() < params.max_trials) {
    const Trial t = phi(alpha);
    if (!armijo_ok(t) || (!first && t.phi >= prev.phi)) return zoom(prev, t);
    if (std::abs(t.dphi) <= curv_bound) return finish(t);
    if (t.dphi >= 0.0) return zoom(t, prev);
    if (alpha >= params.alpha_max) return fail();
    prev = t;
    alpha = std::min(2.0 * alpha, params.alpha_max);
    first = false;
  }
  return fail();
}

} // namespace cgmin
