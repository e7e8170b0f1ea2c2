#include "cgmin/cgm.hpp"

#include <cmath>
#include <stdexcept>

#include "cgmin/errors.hpp"
#include "driver.hpp"

namespace cgmin {

RestartMemory RestartMemory::from_step(DenseVector p, DenseVector y) {
  RestartMemory mem;
  mem.pty = vec::dot(p, y);
  mem.yty = vec::dot(y, y);
  mem.ptp = vec::dot(p, p);
  if (mem.pty <= 0.0)
    throw CurvatureViolation("RestartMemory: p'y must be positive");
  if (mem.yty <= 0.0 || mem.ptp <= 0.0)
    throw CurvatureViolation("RestartMemory: degenerate step pair");
  mem.p_t = std::move(p);
  mem.y_t = std::move(y);
  return mem;
}

namespace {

constexpr double kDegenerate = 1e-30;

double checked_ratio(double num, double denom, const char* what) {
  if (num == 0.0) return 0.0;
  if (std::abs(denom) < kDegenerate * std::abs(num))
    throw DegenerateDenominator(what);
  return num / denom;
}

} // namespace

double beta_pr(const DenseVector& g_next, const DenseVector& y_k,
               const DenseVector& dx_k) {
  return checked_ratio(vec::dot(g_next, y_k), vec::dot(y_k, dx_k),
                       "beta_pr: y'dx vanished");
}

double beta_pr_exact(const DenseVector& g_next, const DenseVector& y_k,
                     const DenseVector& g_k) {
  return checked_ratio(vec::dot(g_next, y_k), vec::dot(g_k, g_k),
                       "beta_pr_exact: g'g vanished");
}

double beta_fr(const DenseVector& g_next, const DenseVector& g_k) {
  return checked_ratio(vec::dot(g_next, g_next), vec::dot(g_k, g_k),
                       "beta_fr: g'g vanished");
}

DenseVector dir_memoryless(const DenseVector& g_next, const DenseVector& p_k,
                           const DenseVector& y_k) {
  const double pty = vec::dot(p_k, y_k);
  if (pty <= 0.0) throw CurvatureViolation("dir_memoryless: p'y <= 0");
  const double yty = vec::dot(y_k, y_k);
  const double pg = vec::dot(p_k, g_next);
  const double yg = vec::dot(y_k, g_next);
  DenseVector d(g_next.size());
  vec::scaled_copy(-1.0, g_next, d);
  vec::axpy(pg / pty, y_k, d);
  vec::axpy(yg / pty - (1.0 + yty / pty) * (pg / pty), p_k, d);
  return d;
}

DenseVector dir_restart(const DenseVector& g, const RestartMemory& mem) {
  if (mem.pty <= 0.0) throw CurvatureViolation("dir_restart: p'y <= 0");
  const double gp = vec::dot(mem.p_t, g);
  const double gy = vec::dot(mem.y_t, g);
  // H_t g = (s/Y) g + (2 gp/s - gy/Y) p - (gp/Y) y, s = p'y, Y = y'y
  DenseVector d(g.size());
  vec::scaled_copy(-mem.pty / mem.yty, g, d);
  vec::axpy(gy / mem.yty - 2.0 * gp / mem.pty, mem.p_t, d);
  vec::axpy(gp / mem.yty, mem.y_t, d);
  return d;
}

DenseVector dir_scaled(const DenseVector& g_next, const DenseVector& p_k,
                       const DenseVector& y_k, const RestartMemory& mem) {
  const double pty = vec::dot(p_k, y_k);
  if (pty <= 0.0) throw CurvatureViolation("dir_scaled: p'y <= 0");
  DenseVector hg = dir_restart(g_next, mem); // -H_t g
  DenseVector hy = dir_restart(y_k, mem);    // -H_t y
  vec::scal(-1.0, hg);
  vec::scal(-1.0, hy);
  const double pg = vec::dot(p_k, g_next);
  const double yhg = vec::dot(y_k, hg);
  const double yhy = vec::dot(y_k, hy);
  // H g = H_t g - (H_t y (p'g) + p (y'H_t g))/p'y + (1 + y'H_t y/p'y)(p'g/p'y) p
  DenseVector d(g_next.size());
  vec::scaled_copy(-1.0, hg, d);
  vec::axpy(pg / pty, hy, d);
  vec::axpy(yhg / pty - (1.0 + yhy / pty) * (pg / pty), p_k, d);
  return d;
}

double powell_fraction(const DenseVector& g_next, const DenseVector& g_k) {
  const double gg = vec::dot(g_next, g_next);
  if (gg <= 0.0) throw ZeroGradient("powell_fraction: ||g_next|| = 0");
  return std::abs(vec::dot(g_next, g_k)) / gg;
}

bool powell_triggered(double fraction, double threshold) {
  return fraction >= threshold;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::IterationLimit: return "IterationLimit";
    case SolveStatus::LineSearchFailure: return "LineSearchFailure";
    case SolveStatus::EvalError: return "EvalError";
  }
  return "?";
}

SolveReport solve_cgm(const Problem& problem, const DenseVector& x0,
                      const SolveOptions& opts, bool powell_enabled) {
  return detail::run_driver(problem, x0, opts,
                            powell_enabled ? detail::Variant::Powell
                                           : detail::Variant::NoPowell,
                            CubicOptions{});
}

} // namespace cgmin
