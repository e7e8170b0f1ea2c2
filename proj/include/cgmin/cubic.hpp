#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cgmin/cgm.hpp"

namespace cgmin {

/// Scalars of the closed-form inverse of (B_t + lambda I).
struct RegScalars {
  double a = 0.0;      ///< y'y / p'p
  double b = 0.0;      ///< 2 y'y / p'y + lambda
  double c = 0.0;      ///< y'y + lambda p'y
  double lambda = 0.0;

  /// Throws DegenerateScalars when the memory is corrupted (c <= 0 or
  /// lambda*b + a <= 0; impossible for valid memory and lambda >= 0).
  static RegScalars from_memory(const RestartMemory& mem, double lambda);
};

struct CubicOptions {
  int max_lambda_trials = 30; ///< U: direction trials per repair before a full restart
  double lambda_multiplier = 5.0; ///< factor on the trigger fraction for the first lambda
  double growth = 2.0;            ///< lambda multiplier between trials
  /// Repair trials pick an (effectively) optimal steplength; a loose
  /// curvature constant would leave the re-tested criterion satisfied at
  /// every lambda.
  LineSearchParams repair_ls = LineSearchParams::exact();
};

/// H_t(lambda) v, the closed-form inverse of (B_t + lambda I) applied to v.
/// O(n): two dot products and three axpys.
DenseVector apply_Ht_lambda(const DenseVector& v, const RestartMemory& mem,
                            double lambda);

/// p~ = (B_t + lambda I)^-1 B_t p_k, the intermediate vector of the
/// regularized update; equals p_k when lambda = 0.
DenseVector p_tilde(const DenseVector& p_k, const RestartMemory& mem,
                    double lambda);

/// Regularized direction -(B_{k+1} + lambda I)^-1 g_next, assembled from
/// H_t(lambda) applications and rank-one corrections. Reduces to
/// dir_scaled at lambda = 0. Throws DegenerateD when the correction
/// denominator vanishes (the caller enlarges lambda or restarts).
DenseVector dir_regularized(const DenseVector& g_next, const DenseVector& p_k,
                            const DenseVector& y_k, const RestartMemory& mem,
                            double lambda);

/// First trial lambda for a repair: 5 |g_next'g_k| / ||g_next||^2.
double lambda_init(const DenseVector& g_next, const DenseVector& g_k);

/// The hybrid solver: identical to solve_cgm until the Powell criterion
/// fires outside a cadence-restart iteration; then the offending step is
/// rolled back and re-taken with increasingly regularized directions, with
/// a full restart after max_lambda_trials unsuccessful tries.
SolveReport solve_hybrid(const Problem& problem, const DenseVector& x0,
                         const SolveOptions& opts,
                         const CubicOptions& copts = {});

/// Iteration state captured when the Powell criterion first fires.
/// `x`, `f`, `g` describe the arrival point whose step is about to be
/// rejected; `p_prev`, `y_prev` are that step's pair, so the rolled-back
/// point is x - p_prev with gradient g - y_prev. `mem` is the restart
/// memory in force when the rejected step was chosen (a rejected restart
/// step's own refresh is unwound). The regularized update consumes the
/// rejected pair.
struct SolverState {
  DenseVector x;
  DenseVector g;
  double f = 0.0;
  DenseVector p_prev;
  DenseVector y_prev;
  RestartMemory mem;
  int k = 0;
  int t = 0;
  long n_beale = 0;
  long n_powell = 0;
  double trigger_fraction = 0.0;
  std::vector<TraceRecord> trace;
};

/// Runs the plain solver until the Powell criterion first fires and returns
/// the state at that point; nullopt when the run terminates without firing.
std::optional<SolverState> capture_powell_trigger(const Problem& problem,
                                                  const DenseVector& x0,
                                                  const SolveOptions& opts);

/// For each lambda, recomputes the repair step from the captured state,
/// line-searches, and reports the resulting Powell fraction. lambda = 0
/// reports the fraction of the rejected (unregularized) step itself.
/// Entries whose line search fails are omitted.
std::vector<std::pair<double, double>> powell_fraction_curve(
    const Problem& problem, const SolverState& state,
    const std::vector<double>& lambdas, const LineSearchParams& ls);

} // namespace cgmin
