#include <doctest.h>

#include <cmath>

#include "cgmin/rng.hpp"
#include "cgmin/vec.hpp"

using namespace cgmin;

TEST_CASE("vector kernels") {
  DenseVector a = {1.0, 2.0, 3.0};
  DenseVector b = {4.0, -5.0, 6.0};
  CHECK(vec::dot(a, b) == 12.0);
  CHECK(vec::norm2(a) == doctest::Approx(std::sqrt(14.0)));
  CHECK(vec::norm_inf(b) == 6.0);
  vec::axpy(2.0, a, b);
  CHECK(b[0] == 6.0);
  CHECK(b[1] == -1.0);
  CHECK(b[2] == 12.0);
  vec::scal(0.5, b);
  CHECK(b[0] == 3.0);
  DenseVector c(3);
  vec::scaled_copy(-1.0, a, c);
  CHECK(c[2] == -3.0);
  CHECK(vec::all_finite(c));
  c[1] = std::numeric_limits<double>::infinity();
  CHECK(!vec::all_finite(c));
}

TEST_CASE("flop counter tracks kernel work") {
  vec::reset_flop_count();
  DenseVector a(100, 1.0), b(100, 2.0);
  (void)vec::dot(a, b);
  CHECK(vec::flop_count() == 200);
  vec::axpy(1.0, a, b);
  CHECK(vec::flop_count() == 400);
}

TEST_CASE("rng streams are deterministic and independent") {
  Rng a(7, 1), b(7, 1), c(7, 2);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    all_equal &= (x == b.next_u64());
    any_diff |= (x != c.next_u64());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform and normal deviates are sane") {
  Rng rng(123);
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double z = rng.normal();
    mean += z;
    var += z * z;
  }
  mean /= n;
  var = var / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);

  Rng ri(5);
  for (int i = 0; i < 1000; ++i) {
    const auto v = ri.uniform_int(1, 50);
    CHECK(v >= 1);
    CHECK(v <= 50);
  }
}
