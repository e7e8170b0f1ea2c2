#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "cgmin/instances.hpp"
#include "cgmin/problems.hpp"
#include "test_util.hpp"

using namespace cgmin;

TEST_CASE("analytic gradients pass the finite-difference check") {
  Rng rng(71);
  for (const auto& name : problems::analytic_names()) {
    // keep the sized families small here; the formulas do not change with n
    std::optional<int> n;
    if (name == "watson") n = 12;
    if (name.starts_with("dixmaan")) n = 30;
    if (name == "dqdrtic") n = 20;
    if (name == "tridia") n = 20;
    const Problem p = problems::make_analytic(name, n);
    for (int trial = 0; trial < 20; ++trial) {
      DenseVector x = p.x0;
      for (auto& v : x) v += 0.5 * rng.normal();
      if (name == "brownbs") {
        // scale the perturbation to the problem's wild variable ranges
        x[0] = 1e6 + rng.normal();
        x[1] = 2e-6 + 1e-3 * rng.normal();
      }
      CAPTURE(name);
      CHECK(testutil::fd_gradient_max_rel_err(p, x) <= 1e-5);
    }
  }
}

TEST_CASE("known optima and standard starts") {
  const Problem s = problems::s206();
  DenseVector g(2);
  CHECK(s.value_grad(DenseVector{1.0, 1.0}, g) == 0.0);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  CHECK(s.x0[0] == -1.2);

  for (char v = 'a'; v <= 'l'; ++v) {
    const Problem d = problems::dixmaan(v, 9);
    DenseVector gd(9);
    CHECK(d.value_grad(DenseVector(9, 0.0), gd) == 1.0); // f* = 1 at x = 0
    CHECK(vec::norm2(gd) == 0.0);
    CHECK(d.known_f_star == 1.0);
  }

  CHECK_THROWS_AS(problems::dixmaan('z', 9), std::invalid_argument);
  CHECK_THROWS_AS(problems::dixmaan('a', 10), std::invalid_argument);
  CHECK_THROWS_AS(problems::make_analytic("nosuch"), std::invalid_argument);

  CHECK(problems::is_quadratic("dqdrtic"));
  CHECK(!problems::is_quadratic("rosenbr"));
}

TEST_CASE("huber loss pieces") {
  // one row, one column, A = [1], b = 0: f = h(x)
  HuberInstance inst;
  inst.m = 1;
  inst.n = 1;
  inst.A = {1.0};
  inst.b = {0.0};
  DenseVector g(1);
  CHECK(huber_value_grad(inst, DenseVector{0.5}, g) == doctest::Approx(0.125));
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(huber_value_grad(inst, DenseVector{2.0}, g) == doctest::Approx(1.5));
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(huber_value_grad(inst, DenseVector{0.0}, g) == 0.0);
  CHECK(g[0] == 0.0);

  // C1 across |z| = 1: one-sided differences agree
  auto slope = [&](double z0, double h) {
    DenseVector gg(1);
    const double fp = huber_value_grad(inst, DenseVector{z0 + h}, gg);
    const double fm = huber_value_grad(inst, DenseVector{z0 - h}, gg);
    return (fp - fm) / (2.0 * h);
  };
  CHECK(std::abs(slope(1.0, 1e-7) - 1.0) < 1e-6);
  CHECK(std::abs(slope(-1.0, 1e-7) + 1.0) < 1e-6);
}

TEST_CASE("group lasso values, penalty gradient, and the zero-group guard") {
  GroupLassoInstance inst;
  inst.m = 2;
  inst.n = 2;
  inst.A = {1.0, 0.0, 0.0, 1.0}; // identity, column-major
  inst.b = {1.0, 2.0};
  inst.group_sizes = {2};
  inst.rho = 0.5;
  DenseVector g(2);

  // x = 0: f = ||b||^2/2, penalty 0, nondifferentiable flag set
  const long hits = inst.nondiff_hits;
  CHECK(glasso_value_grad(inst, DenseVector{0.0, 0.0}, g) ==
        doctest::Approx(2.5));
  CHECK(inst.nondiff_hits == hits + 1);
  CHECK(g[0] == doctest::Approx(-1.0)); // penalty block zeroed

  // unit-norm group: penalty contributes rho, gradient block rho * x
  const DenseVector x = {1.0, 0.0};
  const double f = glasso_value_grad(inst, x, g);
  CHECK(f == doctest::Approx(0.5 * (0.0 + 4.0) + 0.5));
  CHECK(g[0] == doctest::Approx((1.0 - 1.0) + 0.5 * 1.0));
}

TEST_CASE("generated instances: determinism, normalization, structure") {
  const HuberInstance a = gen_huber(100, 20, 1);
  const HuberInstance b = gen_huber(100, 20, 1);
  CHECK(a.A == b.A);
  CHECK(a.b == b.b);
  const HuberInstance c = gen_huber(100, 20, 2);
  CHECK(a.A != c.A);

  for (std::size_t j = 0; j < a.n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.m; ++i)
      s += a.A[j * a.m + i] * a.A[j * a.m + i];
    CHECK(std::abs(std::sqrt(s) - 1.0) <= 1e-12);
  }

  const GroupLassoInstance gl = gen_glasso(500, 4, 50, 7);
  CHECK(gl.group_sizes.size() == 4);
  std::size_t total = 0;
  for (auto s : gl.group_sizes) {
    CHECK(s >= 1);
    CHECK(s <= 50);
    total += s;
  }
  CHECK(total == gl.n);
  // rho matches an independent recomputation of 0.001 ||A'b||_inf
  double worst = 0.0;
  for (std::size_t j = 0; j < gl.n; ++j) {
    double dot = 0.0;
    for (std::size_t i = 0; i < gl.m; ++i)
      dot += gl.A[j * gl.m + i] * gl.b[i];
    worst = std::max(worst, std::abs(dot));
  }
  CHECK(gl.rho == doctest::Approx(0.001 * worst).epsilon(1e-12));

  CHECK_THROWS_AS(gen_huber(0, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_glasso(5, 0, 3, 1), std::invalid_argument);
}

TEST_CASE("generated problems pass the finite-difference check") {
  Rng rng(72);
  const Problem hp = make_problem(gen_huber(40, 12, 3));
  const Problem gp = make_problem(gen_glasso(40, 3, 6, 3));
  for (int trial = 0; trial < 20; ++trial) {
    DenseVector x(12);
    for (auto& v : x) v = rng.normal();
    CHECK(testutil::fd_gradient_max_rel_err(hp, x) <= 1e-5);
  }
  for (int trial = 0; trial < 20; ++trial) {
    DenseVector x(static_cast<std::size_t>(gp.dim));
    for (auto& v : x) v = 0.5 + rng.normal(); // keep groups away from zero
    CHECK(testutil::fd_gradient_max_rel_err(gp, x) <= 1e-5);
  }
}

TEST_CASE("instance files round-trip through save and load") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "cgmin_test_io";
  fs::create_directories(dir);

  const HuberInstance hi = gen_huber(30, 8, 11);
  const auto hp = (dir / "h.bin").string();
  save_instance(hi, hp);
  const Problem hprob = load_instance_problem(hp);
  CHECK(hprob.dim == 8);
  Rng rng(73);
  DenseVector x = testutil::random_vector(rng, 8);
  DenseVector g1(8), g2(8);
  const Problem horig = make_problem(hi);
  CHECK(horig.value_grad(x, g1) == hprob.value_grad(x, g2));
  CHECK(g1 == g2);

  const GroupLassoInstance gi = gen_glasso(30, 3, 5, 11);
  const auto gp = (dir / "g.bin").string();
  save_instance(gi, gp);
  const Problem gprob = load_instance_problem(gp);
  CHECK(gprob.dim == static_cast<int>(gi.n));
  DenseVector xg = testutil::random_vector(rng, gi.n);
  DenseVector g3(gi.n), g4(gi.n);
  const Problem gorig = make_problem(gi);
  CHECK(gorig.value_grad(xg, g3) == gprob.value_grad(xg, g4));
  CHECK(g3 == g4);

  CHECK_THROWS(load_instance_problem((dir / "missing.bin").string()));
  fs::remove_all(dir);
}
