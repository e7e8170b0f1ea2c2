#include "cgmin/vec.hpp"

#include <cassert>
#include <cmath>

namespace cgmin::vec {

namespace {
thread_local std::uint64_t g_flops = 0;
}

std::uint64_t flop_count() noexcept { return g_flops; }
void reset_flop_count() noexcept { g_flops = 0; }

void detail::count_flops(std::uint64_t n) noexcept { g_flops += n; }

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  detail::count_flops(2 * a.size());
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  detail::count_flops(a.size());
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
  detail::count_flops(2 * x.size());
}

void scal(double alpha, std::span<double> y) {
  for (double& v : y) v *= alpha;
  detail::count_flops(y.size());
}

void scaled_copy(double alpha, std::span<const double> x, std::span<double> out) {
  assert(x.size() == out.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i];
  detail::count_flops(x.size());
}

DenseVector zeros(std::size_t n) { return DenseVector(n, 0.0); }

bool all_finite(std::span<const double> a) noexcept {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

} // namespace cgmin::vec
