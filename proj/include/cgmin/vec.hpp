#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cgmin {

/// The only bulk numeric container in the library. All solver math is
/// expressed through the O(n) kernels below; no n-by-n object is ever formed
/// outside the dense test oracle.
using DenseVector = std::vector<double>;

namespace vec {

/// Running count of floating-point operations performed by the kernels on
/// this thread. Used by the scaling diagnostics; costs one add per kernel
/// call.
std::uint64_t flop_count() noexcept;
void reset_flop_count() noexcept;

namespace detail {
void count_flops(std::uint64_t n) noexcept;
}

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// y *= alpha
void scal(double alpha, std::span<double> y);
/// out = alpha * x
void scaled_copy(double alpha, std::span<const double> x, std::span<double> out);

DenseVector zeros(std::size_t n);
bool all_finite(std::span<const double> a) noexcept;

} // namespace vec
} // namespace cgmin
