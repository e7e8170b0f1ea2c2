#include <doctest.h>

#include <cmath>

#include "cgmin/cubic.hpp"
#include "cgmin/errors.hpp"
#include "cgmin/oracle.hpp"
#include "cgmin/problems.hpp"
#include "test_util.hpp"

using namespace cgmin;

namespace {

Eigen::MatrixXd dense_Ht_lambda(const RestartMemory& mem, double lambda) {
  const auto n = static_cast<Eigen::Index>(mem.p_t.size());
  return oracle::dense_inverse(oracle::assemble_Bt(mem) +
                               lambda * Eigen::MatrixXd::Identity(n, n));
}

} // namespace

TEST_CASE("apply_Ht_lambda matches the dense inverse of B_t + lambda I") {
  Rng rng(21);
  for (std::size_t n : {3u, 6u, 20u}) {
    for (int trial = 0; trial < 10; ++trial) {
      auto mem = testutil::random_memory(rng, n);
      for (double lambda : {0.0, 0.1, 1.0, 10.0}) {
        const DenseVector v = testutil::random_vector(rng, n);
        // Forward check: H_t(l) ((B_t + l I) v) = v
        const Eigen::VectorXd bv =
            (oracle::assemble_Bt(mem) +
             lambda * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n))) *
            oracle::to_eigen(v);
        const DenseVector back =
            apply_Ht_lambda(oracle::from_eigen(bv), mem, lambda);
        CHECK(testutil::rel_err(back, v) < 1e-10);
      }
    }
  }
}

TEST_CASE("apply_Ht_lambda reduces to the restart inverse at lambda 0") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    auto mem = testutil::random_memory(rng, 6);
    const DenseVector v = testutil::random_vector(rng, 6);
    DenseVector ht = dir_restart(v, mem); // -H_t v
    vec::scal(-1.0, ht);
    CHECK(testutil::rel_err(apply_Ht_lambda(v, mem, 0.0), ht) < 1e-12);
  }
}

TEST_CASE("apply_Ht_lambda on the orthogonal complement is a pure scaling") {
  DenseVector p = {1.0, 0.0, 0.0};
  DenseVector y = {1.0, 1.0, 0.0};
  auto mem = RestartMemory::from_step(p, y);
  const DenseVector v = {0.0, 0.0, 3.0};
  for (double lambda : {0.0, 0.5, 7.0}) {
    const auto s = RegScalars::from_memory(mem, lambda);
    const DenseVector out = apply_Ht_lambda(v, mem, lambda);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == doctest::Approx(3.0 * mem.pty / s.c).epsilon(1e-14));
  }
}

TEST_CASE("p_tilde equals (B_t + lambda I)^-1 B_t p") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto mem = testutil::random_memory(rng, 6);
    const DenseVector p = testutil::random_vector(rng, 6);
    for (double lambda : {0.0, 0.3, 2.0, 50.0}) {
      const Eigen::VectorXd want = dense_Ht_lambda(mem, lambda) *
                                   oracle::assemble_Bt(mem) *
                                   oracle::to_eigen(p);
      CHECK(testutil::rel_err(p_tilde(p, mem, lambda),
                              oracle::from_eigen(want)) < 1e-10);
    }
  }
}

TEST_CASE("p_tilde is exactly p at lambda 0") {
  Rng rng(24);
  auto mem = testutil::random_memory(rng, 8);
  const DenseVector p = testutil::random_vector(rng, 8);
  const DenseVector pt = p_tilde(p, mem, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(pt[i] == p[i]);
}

TEST_CASE("p_tilde on the orthogonal complement is (y'y/c) p") {
  DenseVector pt_basis = {1.0, 0.0, 0.0};
  DenseVector yt_basis = {1.0, 1.0, 0.0};
  auto mem = RestartMemory::from_step(pt_basis, yt_basis);
  const DenseVector p = {0.0, 0.0, 2.0};
  const double lambda = 3.0;
  const auto s = RegScalars::from_memory(mem, lambda);
  const DenseVector out = p_tilde(p, mem, lambda);
  CHECK(out[2] == doctest::Approx(2.0 * mem.yty / s.c).epsilon(1e-14));
  CHECK(std::abs(out[0]) < 1e-15);
  CHECK(std::abs(out[1]) < 1e-15);
}

TEST_CASE("dir_regularized matches the dense inverse of B_{k+1} + lambda I") {
  Rng rng(25);
  for (std::size_t n : {3u, 6u, 20u}) {
    for (int trial = 0; trial < 10; ++trial) {
      auto mem = testutil::random_memory(rng, n);
      auto [p, y] = testutil::random_pair(rng, n);
      const DenseVector g = testutil::random_vector(rng, n);
      for (double lambda : {0.0, 1.0, 25.0}) {
        const Eigen::MatrixXd Bk1 = oracle::assemble_Bk1(mem, p, y);
        const Eigen::VectorXd want =
            -(oracle::dense_inverse(
                  Bk1 + lambda * Eigen::MatrixXd::Identity(
                                     static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(n))) *
              oracle::to_eigen(g));
        CHECK(testutil::rel_err(dir_regularized(g, p, y, mem, lambda),
                                oracle::from_eigen(want)) < 1e-10);
      }
    }
  }
}

TEST_CASE("dir_regularized reduces to dir_scaled at lambda 0") {
  Rng rng(26);
  for (int trial = 0; trial < 100; ++trial) {
    auto mem = testutil::random_memory(rng, 7);
    auto [p, y] = testutil::random_pair(rng, 7);
    const DenseVector g = testutil::random_vector(rng, 7);
    CHECK(testutil::rel_err(dir_regularized(g, p, y, mem, 0.0),
                            dir_scaled(g, p, y, mem)) < 1e-12);
  }
}

TEST_CASE("dir_regularized of a zero gradient is zero") {
  Rng rng(27);
  auto mem = testutil::random_memory(rng, 5);
  auto [p, y] = testutil::random_pair(rng, 5);
  const DenseVector g(5, 0.0);
  for (double v : dir_regularized(g, p, y, mem, 2.0)) CHECK(v == 0.0);
}

TEST_CASE("dir_regularized rejects nonpositive curvature") {
  Rng rng(28);
  auto mem = testutil::random_memory(rng, 4);
  DenseVector p = {1.0, 0.0, 0.0, 0.0};
  DenseVector y = {-1.0, 0.0, 0.0, 0.0};
  const DenseVector g = testutil::random_vector(rng, 4);
  CHECK_THROWS_AS(dir_regularized(g, p, y, mem, 1.0), CurvatureViolation);
}

TEST_CASE("lambda_init is five times the Powell fraction") {
  DenseVector a = {1.0, 0.0};
  DenseVector b = {0.0, 1.0};
  CHECK(lambda_init(a, b) == 0.0);
  DenseVector c = {1.0, 1.0};
  DenseVector d = {0.1, 0.1}; // fraction 0.1 -> lambda 0.5
  CHECK(lambda_init(c, d) == doctest::Approx(0.5));
  // fraction exactly at the threshold gives lambda 1
  DenseVector e = {1.0, 0.0};
  DenseVector f = {0.2, 0.0};
  CHECK(lambda_init(e, f) == doctest::Approx(1.0));
  CHECK_THROWS_AS(lambda_init(DenseVector{0.0, 0.0}, a), ZeroGradient);
}

TEST_CASE("RegScalars validates lambda and memory") {
  Rng rng(29);
  auto mem = testutil::random_memory(rng, 3);
  CHECK_THROWS_AS(RegScalars::from_memory(mem, -1.0), std::invalid_argument);
  const auto s = RegScalars::from_memory(mem, 2.0);
  CHECK(s.a == doctest::Approx(mem.yty / mem.ptp));
  CHECK(s.b == doctest::Approx(2.0 * mem.yty / mem.pty + 2.0));
  CHECK(s.c == doctest::Approx(mem.yty + 2.0 * mem.pty));
}

TEST_CASE("hybrid equals plain solver when the criterion never fires") {
  Rng rng(30);
  const auto quad = testutil::random_quadratic(rng, 10, 50.0);
  const Problem problem =
      quad.problem("quad10", testutil::random_vector(rng, 10));
  SolveOptions opts;
  opts.ls = LineSearchParams::exact();
  opts.eps_abs = 1e-10;
  opts.record_trace = true;
  const SolveReport a = solve_cgm(problem, problem.x0, opts, true);
  const SolveReport b = solve_hybrid(problem, problem.x0, opts);
  REQUIRE(a.status == SolveStatus::Converged);
  REQUIRE(b.status == SolveStatus::Converged);
  CHECK(b.n_cubic_invocations == 0);
  REQUIRE(a.iters == b.iters);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].f == b.trace[i].f);       // bitwise identical paths
    CHECK(a.trace[i].gnorm == b.trace[i].gnorm);
  }
}

TEST_CASE("hybrid on s206 repairs the trigger and converges") {
  const Problem problem = problems::s206();
  SolveOptions opts;
  opts.ls = LineSearchParams::near_exact();
  opts.eps_abs = 1e-7;
  const SolveReport rep = solve_hybrid(problem, problem.x0, opts);
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(rep.f_star <= 1e-12);
  CHECK(rep.n_cubic_invocations >= 1);
  CHECK(rep.iters >= 2);
  CHECK(rep.iters <= 15);
  CHECK(rep.max_lambda_trials <= 30);
}

TEST_CASE("hybrid on rosenbrock stays close to the plain solver") {
  const Problem problem = problems::rosenbr();
  SolveOptions opts;
  opts.ls = LineSearchParams::near_exact();
  opts.eps_abs = 1e-6;
  const SolveReport powell = solve_cgm(problem, problem.x0, opts, true);
  const SolveReport hybrid = solve_hybrid(problem, problem.x0, opts);
  CHECK(powell.status == SolveStatus::Converged);
  CHECK(hybrid.status == SolveStatus::Converged);
  CHECK(hybrid.f_star <= 1e-10);
  CHECK(hybrid.iters <= powell.iters + 30);
}

TEST_CASE("lambda trial count respects the safeguard bound") {
  const Problem problem = problems::rosenbr();
  SolveOptions opts;
  opts.ls = LineSearchParams::near_exact();
  CubicOptions copts;
  copts.max_lambda_trials = 2;
  const SolveReport rep = solve_hybrid(problem, problem.x0, opts, copts);
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(rep.max_lambda_trials <= 2);
}

TEST_CASE("powell_fraction_curve starts at the trigger fraction") {
  const Problem problem = problems::s206();
  SolveOptions opts;
  opts.ls = LineSearchParams::near_exact();
  const auto state = capture_powell_trigger(problem, problem.x0, opts);
  REQUIRE(state.has_value());
  CHECK(state->k <= 6);
  CHECK(state->trigger_fraction > 10.0);

  const auto curve = powell_fraction_curve(
      problem, *state, {0.0, 100.0, 300.0, 600.0}, LineSearchParams::exact());
  REQUIRE(!curve.empty());
  CHECK(curve.front().first == 0.0);
  CHECK(curve.front().second == doctest::Approx(state->trigger_fraction));
}

TEST_CASE("capture returns nothing when the criterion never fires") {
  Rng rng(31);
  const auto quad = testutil::random_quadratic(rng, 8, 10.0);
  const Problem problem =
      quad.problem("quad8", testutil::random_vector(rng, 8));
  SolveOptions opts;
  opts.ls = LineSearchParams::exact();
  opts.eps_abs = 1e-10;
  CHECK(!capture_powell_trigger(problem, problem.x0, opts).has_value());
}
