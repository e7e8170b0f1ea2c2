#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cgmin/linesearch.hpp"
#include "cgmin/problems.hpp"
#include "cgmin/vec.hpp"

namespace cgmin {

/// Step pair recorded at the most recent restart, (p_t, y_t), together with
/// the scalars that define the scaled restart inverse H_t. The curvature
/// product pty is positive for any pair produced by the Wolfe search.
struct RestartMemory {
  DenseVector p_t;
  DenseVector y_t;
  double pty = 0.0;
  double yty = 0.0;
  double ptp = 0.0;

  static RestartMemory from_step(DenseVector p, DenseVector y);
};

/// General-denominator beta: g_next'y / (y'dx). Returns 0 when the numerator
/// vanishes; throws DegenerateDenominator when only the denominator does.
double beta_pr(const DenseVector& g_next, const DenseVector& y_k,
               const DenseVector& dx_k);
/// Exact-line-search (Polak-Ribiere) form: g_next'y / (g_k'g_k).
double beta_pr_exact(const DenseVector& g_next, const DenseVector& y_k,
                     const DenseVector& g_k);
/// Fletcher-Reeves form, the quadratic specialization:
/// g_next'g_next / (g_k'g_k).
double beta_fr(const DenseVector& g_next, const DenseVector& g_k);

/// Direction from the plain memoryless update (base matrix I):
///   -[I - (p y' + y p')/p'y + (1 + y'y/p'y) p p'/p'y] g_next.
DenseVector dir_memoryless(const DenseVector& g_next, const DenseVector& p_k,
                           const DenseVector& y_k);

/// Restart direction -H_t g with the self-scaled restart inverse.
DenseVector dir_restart(const DenseVector& g, const RestartMemory& mem);

/// Between restarts: the update of H_t by the latest pair (p_k, y_k),
/// applied to g_next. Two H_t applications plus dot products; no matrix.
DenseVector dir_scaled(const DenseVector& g_next, const DenseVector& p_k,
                       const DenseVector& y_k, const RestartMemory& mem);

/// |g_next'g_k| / ||g_next||^2, the conjugacy-loss measure.
double powell_fraction(const DenseVector& g_next, const DenseVector& g_k);
/// The restart test: fraction >= threshold (default 0.2).
bool powell_triggered(double fraction, double threshold = 0.2);

enum class SolveStatus : std::uint8_t {
  Converged,
  IterationLimit,
  LineSearchFailure,
  EvalError,
};

const char* to_string(SolveStatus s);

/// How each accepted iteration chose its direction.
enum class StepKind : std::uint8_t {
  SteepestDescent, ///< the initialization step
  Scaled,          ///< double-update direction between restarts
  Beale,           ///< cadence restart
  Powell,          ///< conjugacy-loss restart (includes exhausted repairs)
  Cubic,           ///< accepted regularized repair
};

struct TraceRecord {
  int k = 0;
  double f = 0.0;
  double gnorm = 0.0;
  StepKind kind = StepKind::Scaled;
  double powell_fraction = 0.0; ///< fraction observed on arrival at this iterate
  double lambda = 0.0;          ///< final lambda of a repair, else 0
  int lambda_trials = 0;        ///< directions tried during a repair, else 0
};

/// Per-iteration observer, called after each accepted step with the
/// iterate's trace record. Used by tests and by the lambda-curve capture.
using IterObserver = std::function<void(const TraceRecord&)>;

struct SolveOptions {
  /// Gradient 2-norm tolerance. By default it scales with the initial
  /// gradient: terminate when ||g|| <= eps * max(1, ||g(x0)||).
  double eps = 1e-5;
  /// When set, an absolute tolerance is used instead of the scaled rule.
  std::optional<double> eps_abs;
  int max_iters = 10000;
  /// Wall-clock budget in seconds; 0 disables it. Expiry reports
  /// IterationLimit. Timed runs are not reproducible, so benchmarks leave
  /// this off by default.
  double time_cap = 0.0;
  LineSearchParams ls;
  double powell_threshold = 0.2;
  /// Per-iteration records cost O(1) memory each; off by default so large
  /// runs stay O(n).
  bool record_trace = false;
  IterObserver observer;
};

struct SolveReport {
  SolveStatus status = SolveStatus::IterationLimit;
  int iters = 0;
  double f_star = 0.0;
  double gnorm = 0.0;
  long n_beale = 0;
  long n_powell = 0;
  long n_cubic_invocations = 0;
  long n_lambda_doublings = 0;
  int max_lambda_trials = 0; ///< largest trial count of any single repair
  double phi = 0.0;          ///< Powell-restart iterations / total iterations
  double wall_time = 0.0;    ///< seconds
  long f_evals = 0;
  long g_evals = 0;
  std::vector<TraceRecord> trace;
};

/// The memoryless-BFGS conjugate gradient solver: steepest-descent first
/// step, self-scaled two-step initialization, cadence restart every n
/// iterations since the last restart, and (when enabled) a full restart
/// whenever the Powell criterion fires.
SolveReport solve_cgm(const Problem& problem, const DenseVector& x0,
                      const SolveOptions& opts, bool powell_enabled = true);

} // namespace cgmin
