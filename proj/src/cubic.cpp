#include "cgmin/cubic.hpp"

#include <cmath>
#include <stdexcept>

#include "cgmin/errors.hpp"
#include "driver.hpp"

namespace cgmin {

RegScalars RegScalars::from_memory(const RestartMemory& mem, double lambda) {
  if (lambda < 0.0)
    throw std::invalid_argument("RegScalars: lambda must be >= 0");
  RegScalars s;
  s.lambda = lambda;
  s.a = mem.yty / mem.ptp;
  s.b = 2.0 * mem.yty / mem.pty + lambda;
  s.c = mem.yty + lambda * mem.pty;
  if (!(s.c > 0.0) || !(lambda * s.b + s.a > 0.0))
    throw DegenerateScalars("regularized restart scalars are invalid");
  return s;
}

namespace {

// B_t v, the restart Hessian estimate applied to v.
DenseVector apply_Bt(const DenseVector& v, const RestartMemory& mem) {
  const double scale = mem.yty / mem.pty;
  const double pv = vec::dot(mem.p_t, v);
  const double yv = vec::dot(mem.y_t, v);
  DenseVector out(v.size());
  vec::scaled_copy(scale, v, out);
  vec::axpy(-scale * pv / mem.ptp, mem.p_t, out);
  vec::axpy(scale * yv / mem.yty, mem.y_t, out);
  return out;
}

} // namespace

DenseVector apply_Ht_lambda(const DenseVector& v, const RestartMemory& mem,
                            double lambda) {
  const RegScalars s = RegScalars::from_memory(mem, lambda);
  const double denom = s.c * (lambda * s.b + s.a);
  const double pv = vec::dot(mem.p_t, v);
  const double yv = vec::dot(mem.y_t, v);
  DenseVector out(v.size());
  vec::scaled_copy(mem.pty / s.c, v, out);
  vec::axpy((s.a * s.b * pv - s.a * yv) / denom, mem.p_t, out);
  vec::axpy((-lambda * yv - s.a * pv) / denom, mem.y_t, out);
  return out;
}

DenseVector p_tilde(const DenseVector& p_k, const RestartMemory& mem,
                    double lambda) {
  // (B_t + lambda I)^-1 B_t p = p - lambda H_t(lambda) p
  DenseVector out = apply_Ht_lambda(p_k, mem, lambda);
  vec::scal(-lambda, out);
  vec::axpy(1.0, p_k, out);
  return out;
}

DenseVector dir_regularized(const DenseVector& g_next, const DenseVector& p_k,
                            const DenseVector& y_k, const RestartMemory& mem,
                            double lambda) {
  const double pky = vec::dot(p_k, y_k);
  if (pky <= 0.0) throw CurvatureViolation("dir_regularized: p'y <= 0");

  const DenseVector hg = apply_Ht_lambda(g_next, mem, lambda);
  const DenseVector hy = apply_Ht_lambda(y_k, mem, lambda);
  DenseVector pt = apply_Ht_lambda(p_k, mem, lambda); // becomes p~ below
  vec::scal(-lambda, pt);
  vec::axpy(1.0, p_k, pt);
  const DenseVector btp = apply_Bt(p_k, mem);

  const double yhy = vec::dot(y_k, hy);
  const double pbp = vec::dot(p_k, btp);
  const double pbpt = vec::dot(btp, pt); // p'B_t p~
  const double ypt = vec::dot(y_k, pt);
  const double term1 = (pky + yhy) * (pbp - pbpt);
  const double term2 = ypt * ypt;
  const double dd = term1 + term2;
  if (std::abs(dd) < 1e-30 * (std::abs(term1) + std::abs(term2)) || dd == 0.0)
    throw DegenerateD("dir_regularized: rank-one denominator vanished");

  const double yhg = vec::dot(y_k, hg);
  const double ptg = vec::dot(pt, g_next);
  // H g = H_t(l)g - (y'p~/d)(p~ y'H_t(l)g + H_t(l)y p~'g)
  //       + ((p'y + y'H_t(l)y)/d) (p~'g) p~ - ((p'B_t p - p'B_t p~)/d) (y'H_t(l)g) H_t(l)y
  DenseVector out(g_next.size());
  vec::scaled_copy(-1.0, hg, out);
  vec::axpy((ypt * yhg - (pky + yhy) * ptg) / dd, pt, out);
  vec::axpy((ypt * ptg + (pbp - pbpt) * yhg) / dd, hy, out);
  return out;
}

double lambda_init(const DenseVector& g_next, const DenseVector& g_k) {
  return 5.0 * powell_fraction(g_next, g_k);
}

SolveReport solve_hybrid(const Problem& problem, const DenseVector& x0,
                         const SolveOptions& opts, const CubicOptions& copts) {
  return detail::run_driver(problem, x0, opts, detail::Variant::Hybrid, copts);
}

std::optional<SolverState> capture_powell_trigger(const Problem& problem,
                                                  const DenseVector& x0,
                                                  const SolveOptions& opts) {
  SolverState state;
  bool captured = false;
  detail::DriverHooks hooks;
  hooks.capture = &state;
  hooks.captured = &captured;
  detail::run_driver(problem, x0, opts, detail::Variant::Powell,
                     CubicOptions{}, hooks);
  if (!captured) return std::nullopt;
  return state;
}

std::vector<std::pair<double, double>> powell_fraction_curve(
    const Problem& problem, const SolverState& state,
    const std::vector<double>& lambdas, const LineSearchParams& ls) {
  // Rolled-back point and its gradient.
  DenseVector x_back = state.x;
  vec::axpy(-1.0, state.p_prev, x_back);
  DenseVector g_back = state.g;
  vec::axpy(-1.0, state.y_prev, g_back);
  const double f_back = problem.eval_f(x_back);

  std::vector<std::pair<double, double>> curve;
  curve.reserve(lambdas.size());
  for (double lambda : lambdas) {
    if (lambda == 0.0) {
      // The fraction of the unregularized step is the one that fired.
      curve.emplace_back(0.0, state.trigger_fraction);
      continue;
    }
    DenseVector d;
    try {
      d = dir_regularized(g_back, state.p_prev, state.y_prev, state.mem,
                          lambda);
    } catch (const Error&) {
      continue;
    }
    if (vec::dot(g_back, d) >= 0.0) continue;
    LineSearchResult r = line_search(problem, x_back, d, f_back, g_back, ls);
    if (r.status != LineSearchStatus::Success) continue;
    const double g2 = vec::dot(r.g_new, r.g_new);
    if (g2 <= 0.0) {
      curve.emplace_back(lambda, 0.0);
      continue;
    }
    curve.emplace_back(lambda, std::abs(vec::dot(r.g_new, g_back)) / g2);
  }
  return curve;
}

} // namespace cgmin
