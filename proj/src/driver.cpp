#include "driver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "cgmin/errors.hpp"
#include "cgmin/linesearch.hpp"

namespace cgmin::detail {

namespace {

using Clock = std::chrono::steady_clock;

struct Accepted {
  DenseVector p, y; // step and gradient difference
  double f;
  DenseVector g;
};

// Materializes the step a successful line search found along d.
Accepted accept(const DenseVector& d, const DenseVector& g_from,
                LineSearchResult&& ls) {
  Accepted a;
  a.p.resize(d.size());
  vec::scaled_copy(ls.alpha, d, a.p);
  a.f = ls.f_new;
  a.g = std::move(ls.g_new);
  a.y = a.g;
  vec::axpy(-1.0, g_from, a.y);
  return a;
}

} // namespace

SolveReport run_driver(const Problem& problem, const DenseVector& x0,
                       const SolveOptions& opts, Variant variant,
                       const CubicOptions& copts, DriverHooks hooks) {
  if (opts.max_iters < 1)
    throw std::invalid_argument("solve: max_iters must be >= 1");
  if (!(opts.eps > 0.0) || (opts.eps_abs && !(*opts.eps_abs > 0.0)))
    throw std::invalid_argument("solve: eps must be positive");
  if (!(opts.powell_threshold > 0.0))
    throw std::invalid_argument("solve: powell_threshold must be positive");
  if (copts.max_lambda_trials < 1 || !(copts.growth > 1.0) ||
      !(copts.lambda_multiplier > 0.0))
    throw std::invalid_argument("solve: bad cubic options");
  const auto n = static_cast<int>(x0.size());
  if (n != problem.dim)
    throw std::invalid_argument("solve: x0 has wrong dimension");

  const auto start = Clock::now();
  SolveReport rep;
  long powell_iters = 0;
  auto finish = [&](SolveStatus status, int iters, double f, double gnorm) {
    rep.status = status;
    rep.iters = iters;
    rep.f_star = f;
    rep.gnorm = gnorm;
    rep.phi = iters > 0 ? static_cast<double>(powell_iters) / iters : 0.0;
    rep.wall_time =
        std::chrono::duration<double>(Clock::now() - start).count();
    return rep;
  };

  DenseVector x = x0;
  DenseVector g(x.size());
  double f;
  try {
    f = problem.value_grad(x, g);
    ++rep.f_evals;
    ++rep.g_evals;
  } catch (...) {
    return finish(SolveStatus::EvalError, 0, 0.0, 0.0);
  }
  if (!std::isfinite(f) || !vec::all_finite(g))
    return finish(SolveStatus::EvalError, 0, f, 0.0);
  double gnorm = vec::norm2(g);
  const double eps =
      opts.eps_abs ? *opts.eps_abs : opts.eps * std::max(1.0, gnorm);
  if (gnorm <= eps) return finish(SolveStatus::Converged, 0, f, gnorm);

  auto search = [&](const DenseVector& from_x, const DenseVector& d,
                    double f_at, const DenseVector& g_at,
                    const LineSearchParams& ls) {
    LineSearchResult r = line_search(problem, from_x, d, f_at, g_at, ls);
    rep.f_evals += r.evals;
    rep.g_evals += r.grad_evals;
    return r;
  };

  auto record = [&](const TraceRecord& rec) {
    if (opts.record_trace) rep.trace.push_back(rec);
    if (opts.observer) opts.observer(rec);
  };

  // Initialization: steepest descent with the first trial step scaled to
  // unit length.
  DenseVector d(x.size());
  vec::scaled_copy(-1.0, g, d);
  LineSearchParams ls0 = opts.ls;
  ls0.alpha_init = std::min(1.0 / gnorm, opts.ls.alpha_max);
  LineSearchResult ls = search(x, d, f, g, ls0);
  if (ls.status != LineSearchStatus::Success)
    return finish(SolveStatus::LineSearchFailure, 0, f, gnorm);

  // Full previous-iterate view; a hybrid repair rolls back to it.
  DenseVector x_prev = x;
  double f_prev = f;
  DenseVector g_prev = g;

  Accepted first = accept(d, g, std::move(ls));
  vec::axpy(1.0, first.p, x);
  f = first.f;
  g = std::move(first.g);
  gnorm = vec::norm2(g);
  DenseVector p_prev = std::move(first.p);
  DenseVector y_prev = std::move(first.y);

  RestartMemory mem;
  auto rebuild_memory = [&]() {
    try {
      mem = RestartMemory::from_step(p_prev, y_prev);
      return true;
    } catch (const CurvatureViolation&) {
      return false;
    }
  };
  if (!rebuild_memory())
    return finish(SolveStatus::LineSearchFailure, 1, f, gnorm);
  // Memory as of the previous direction decision; a rollback of a restart
  // step needs it.
  RestartMemory mem_prev = mem;
  int k = 1, t = 1;
  // After an exhausted repair the restart step may itself re-satisfy the
  // criterion; a second rollback at the same iterate could cycle without
  // progress, so the trigger falls through to a forward restart instead.
  int exhausted_at = 0;
  StepKind last_kind = StepKind::SteepestDescent;

  auto arrival_fraction = [&]() {
    const double g2 = gnorm * gnorm;
    return g2 > 0.0 ? std::abs(vec::dot(g, g_prev)) / g2 : 0.0;
  };
  double frac = arrival_fraction();
  record({k, f, gnorm, last_kind, frac, 0.0, 0});

  while (true) {
    if (gnorm <= eps) return finish(SolveStatus::Converged, k, f, gnorm);
    if (k >= opts.max_iters)
      return finish(SolveStatus::IterationLimit, k, f, gnorm);
    if (opts.time_cap > 0.0 &&
        std::chrono::duration<double>(Clock::now() - start).count() >
            opts.time_cap)
      return finish(SolveStatus::IterationLimit, k, f, gnorm);

    const bool beale = (k - t) % n == 0;
    const bool fire = !beale && variant != Variant::NoPowell &&
                      powell_triggered(frac, opts.powell_threshold);

    // The memory in force while the rejected step was current: a restart
    // step refreshes it from its own pair, and a repair keeps that view.
    const bool rejected_restart =
        last_kind == StepKind::Beale || last_kind == StepKind::Powell;

    if (fire && hooks.capture != nullptr) {
      SolverState& st = *hooks.capture;
      st.x = x;
      st.g = g;
      st.f = f;
      st.p_prev = p_prev;
      st.y_prev = y_prev;
      st.mem = mem;
      st.k = k;
      st.t = t;
      st.n_beale = rep.n_beale;
      st.n_powell = rep.n_powell;
      st.trigger_fraction = frac;
      st.trace = rep.trace;
      if (hooks.captured) *hooks.captured = true;
      return finish(SolveStatus::IterationLimit, k, f, gnorm);
    }

    if (variant == Variant::Hybrid && fire && k != exhausted_at) {
      // Roll the offending step back and re-take it from the previous
      // iterate; the rejected pair feeds the regularized update.
      ++rep.n_cubic_invocations;
      double lambda = copts.lambda_multiplier * frac;
      int trials = 0;
      bool repaired = false;
      LineSearchResult rls;
      while (true) {
        ++trials;
        bool usable = true;
        try {
          d = dir_regularized(g_prev, p_prev, y_prev, mem, lambda);
          usable = vec::dot(g_prev, d) < 0.0;
        } catch (const Error&) {
          usable = false;
        }
        if (usable) {
          rls = search(x_prev, d, f_prev, g_prev, copts.repair_ls);
          usable = rls.status == LineSearchStatus::Success;
        }
        if (usable) {
          const double g2 = vec::dot(rls.g_new, rls.g_new);
          const double fr =
              g2 > 0.0 ? std::abs(vec::dot(rls.g_new, g_prev)) / g2 : 0.0;
          if (!powell_triggered(fr, opts.powell_threshold)) {
            repaired = true;
            break;
          }
        }
        if (trials >= copts.max_lambda_trials) break;
        lambda *= copts.growth;
        ++rep.n_lambda_doublings;
      }
      rep.max_lambda_trials = std::max(rep.max_lambda_trials, trials);

      // The revoked iterate no longer describes the trajectory.
      if (last_kind == StepKind::Beale) {
        --rep.n_beale;
      } else if (last_kind == StepKind::Powell) {
        --rep.n_powell;
        --powell_iters;
      }
      if (!rep.trace.empty()) rep.trace.pop_back();

      if (!repaired) {
        // Exhausted the lambda budget: full restart from the rolled-back
        // iterate.
        d = dir_restart(g_prev, mem);
        rls = search(x_prev, d, f_prev, g_prev, opts.ls);
        if (rls.status != LineSearchStatus::Success)
          return finish(SolveStatus::LineSearchFailure, k - 1, f_prev,
                        vec::norm2(g_prev));
      }
      const bool was_restart = rejected_restart;
      Accepted st = accept(d, g_prev, std::move(rls));
      x = x_prev;
      vec::axpy(1.0, st.p, x);
      f = st.f;
      g = std::move(st.g);
      gnorm = vec::norm2(g);
      p_prev = std::move(st.p);
      y_prev = std::move(st.y);
      if (repaired) {
        // A repaired restart step still refreshes the memory: it is the
        // step actually taken on the restart iteration.
        if (was_restart) {
          mem_prev = mem;
          if (!rebuild_memory())
            return finish(SolveStatus::LineSearchFailure, k, f, gnorm);
        }
        last_kind = StepKind::Cubic;
      } else {
        mem_prev = mem;
        if (!rebuild_memory())
          return finish(SolveStatus::LineSearchFailure, k, f, gnorm);
        t = k - 1;
        exhausted_at = k;
        ++rep.n_powell;
        ++powell_iters;
        last_kind = StepKind::Powell;
        lambda = 0.0;
      }
      frac = arrival_fraction();
      record({k, f, gnorm, last_kind, frac, lambda, trials});
      continue;
    }

    StepKind kind;
    bool refresh = false;
    if (beale) {
      d = dir_restart(g, mem);
      kind = StepKind::Beale;
    } else if (fire) {
      // Powell variant always restarts here; the hybrid lands here only
      // when a rollback at this iterate already exhausted its budget.
      d = dir_restart(g, mem);
      kind = StepKind::Powell;
    } else if (vec::dot(p_prev, y_prev) > 0.0) {
      d = dir_scaled(g, p_prev, y_prev, mem);
      kind = StepKind::Scaled;
      if (vec::dot(g, d) >= 0.0) {
        // Roundoff non-descent; the restart matrix is positive definite.
        d = dir_restart(g, mem);
        kind = StepKind::Beale;
      }
    } else {
      // Degenerate curvature cannot occur under Wolfe steps but is guarded:
      // fall back to a cadence-style restart.
      d = dir_restart(g, mem);
      kind = StepKind::Beale;
    }
    if (vec::dot(g, d) >= 0.0)
      return finish(SolveStatus::LineSearchFailure, k, f, gnorm);
    if (kind != StepKind::Scaled) {
      refresh = true;
      t = k;
      if (kind == StepKind::Beale)
        ++rep.n_beale;
      else {
        ++rep.n_powell;
        ++powell_iters;
      }
    }

    ls = search(x, d, f, g, opts.ls);
    if (ls.status != LineSearchStatus::Success)
      return finish(SolveStatus::LineSearchFailure, k, f, gnorm);
    x_prev = x;
    f_prev = f;
    g_prev = g;
    Accepted st = accept(d, g_prev, std::move(ls));
    vec::axpy(1.0, st.p, x);
    f = st.f;
    g = std::move(st.g);
    gnorm = vec::norm2(g);
    p_prev = std::move(st.p);
    y_prev = std::move(st.y);
    if (refresh) {
      mem_prev = mem;
      if (!rebuild_memory())
        return finish(SolveStatus::LineSearchFailure, k + 1, f, gnorm);
    }
    ++k;
    last_kind = kind;
    frac = arrival_fraction();
    record({k, f, gnorm, kind, frac, 0.0, 0});
  }
}

} // namespace cgmin::detail
