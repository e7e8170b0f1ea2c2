#pragma once

// Shared helpers for the unit suites: seeded sampling of step pairs with
// positive curvature, random SPD quadratics, and a central finite-difference
// gradient check.

#include <cmath>
#include <span>
#include <vector>

#include "cgmin/cgm.hpp"
#include "cgmin/problems.hpp"
#include "cgmin/rng.hpp"

namespace testutil {

using cgmin::DenseVector;

inline DenseVector random_vector(cgmin::Rng& rng, std::size_t n,
                                 double scale = 1.0) {
  DenseVector v(n);
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

/// Step pair with solidly positive curvature: resamples until the angle
/// between p and y is bounded away from 90 degrees, as Wolfe pairs are.
struct StepPair {
  DenseVector p, y;
};

inline StepPair random_pair(cgmin::Rng& rng, std::size_t n) {
  // y = p + perturbation keeps the angle bounded at every dimension, the
  // way Wolfe-accepted pairs behave.
  while (true) {
    DenseVector p = random_vector(rng, n);
    DenseVector y = random_vector(rng, n, 0.75);
    cgmin::vec::axpy(1.0, p, y);
    const double py = cgmin::vec::dot(p, y);
    const double np = cgmin::vec::norm2(p), ny = cgmin::vec::norm2(y);
    if (py > 0.05 * np * ny) return {std::move(p), std::move(y)};
  }
}

inline cgmin::RestartMemory random_memory(cgmin::Rng& rng, std::size_t n) {
  auto [p, y] = random_pair(rng, n);
  return cgmin::RestartMemory::from_step(std::move(p), std::move(y));
}

inline double rel_err(std::span<const double> got,
                      std::span<const double> want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num) / std::max(1e-300, std::sqrt(den));
}

/// Strictly convex quadratic f = x'Qx/2 - b'x with Q = V diag(eigs) V'-like
/// structure built from random Householder-ish mixing; eigenvalues in
/// [1, spread].
struct Quadratic {
  std::vector<double> Q; // n*n row-major
  int n;

  /// f = x'Qx/2, minimized at 0 with value 0, so high-accuracy searches
  /// never fight floating-point cancellation in f.
  cgmin::Problem problem(const std::string& name, DenseVector x0) const {
    cgmin::Problem pr;
    pr.name = name;
    pr.dim = n;
    pr.x0 = std::move(x0);
    const auto qm = Q;
    const int nn = n;
    pr.value_grad = [qm, nn](std::span<const double> x, std::span<double> g) {
      double f = 0.0;
      for (int i = 0; i < nn; ++i) {
        double qi = 0.0;
        for (int j = 0; j < nn; ++j)
          qi += qm[static_cast<std::size_t>(i * nn + j)] *
                x[static_cast<std::size_t>(j)];
        g[static_cast<std::size_t>(i)] = qi;
        f += 0.5 * x[static_cast<std::size_t>(i)] * qi;
      }
      return f;
    };
    return pr;
  }
};

inline Quadratic random_quadratic(cgmin::Rng& rng, int n,
                                  double spread = 100.0) {
  // Q = A'A scaled into [1, ~spread]: A random, then shift by identity.
  const auto nn = static_cast<std::size_t>(n);
  std::vector<double> a(nn * nn);
  for (auto& v : a) v = rng.normal();
  Quadratic quad;
  quad.n = n;
  quad.Q.assign(nn * nn, 0.0);
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < nn; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < nn; ++k) s += a[k * nn + i] * a[k * nn + j];
      quad.Q[i * nn + j] = s;
    }
  double trace = 0.0;
  for (std::size_t i = 0; i < nn; ++i) trace += quad.Q[i * nn + i];
  const double scale = (spread - 1.0) / std::max(1e-12, trace);
  for (auto& v : quad.Q) v *= scale;
  for (std::size_t i = 0; i < nn; ++i) quad.Q[i * nn + i] += 1.0;
  return quad;
}

/// Central finite-difference gradient, h = 1e-6 * max(1, |x_j|).
inline DenseVector fd_gradient(const cgmin::Problem& p, DenseVector x) {
  DenseVector g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    const double orig = x[j];
    x[j] = orig + h;
    const double fp = p.eval_f(x);
    x[j] = orig - h;
    const double fm = p.eval_f(x);
    x[j] = orig;
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline double fd_gradient_max_rel_err(const cgmin::Problem& p,
                                      const DenseVector& x) {
  const DenseVector gfd = fd_gradient(p, x);
  const DenseVector g = p.eval_grad(x);
  double worst = 0.0;
  const double scale = std::max(1.0, cgmin::vec::norm2(gfd));
  for (std::size_t j = 0; j < x.size(); ++j)
    worst = std::max(worst, std::abs(g[j] - gfd[j]) / scale);
  return worst;
}

} // namespace testutil
