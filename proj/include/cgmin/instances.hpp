#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cgmin/problems.hpp"
#include "cgmin/vec.hpp"

namespace cgmin {

/// Dense regression data for the Huber-loss problem
///   min_x sum_i h_i(Ax - b),
/// h_i(z) = z_i^2 / 2 for |z_i| <= 1 and |z_i| - 1/2 otherwise.
///
/// A is stored column-major; its columns have unit 2-norm by construction.
struct HuberInstance {
  std::size_t m = 0, n = 0;
  std::uint64_t seed = 0;
  std::vector<double> A; // m * n, column-major
  DenseVector b;         // m
};

/// Data for the group-LASSO problem
///   min_x ||Ax - b||^2 / 2 + rho * sum_i ||x_i||,
/// where x_i are contiguous variable groups partitioning {0..n-1}.
struct GroupLassoInstance {
  std::size_t m = 0, n = 0;
  std::uint64_t seed = 0;
  std::vector<double> A; // m * n, column-major
  DenseVector b;         // m
  std::vector<std::size_t> group_sizes;
  double rho = 0.0;
  /// Number of evaluations that hit the non-differentiable set (a group with
  /// ||x_i|| below the guard); the penalty gradient block is zeroed there.
  mutable long nondiff_hits = 0;
};

/// Draws A with N(0,1) entries and unit-normalized columns, x_true from the
/// documented distribution, and b = A x_true + v with v ~ N(0, 0.1)
/// (variance 0.1). Deterministic under `seed`; substream tags: 1 = A,
/// 2 = x_true, 3 = v, 4 = group layout.
HuberInstance gen_huber(std::size_t m, std::size_t n, std::uint64_t seed);

/// Group sizes are uniform on [1, K]; n is their sum. rho = 0.001 *
/// ||A'b||_inf. Half of the groups of x_true are zeroed (each with
/// probability 1/2).
GroupLassoInstance gen_glasso(std::size_t m, std::size_t n_groups,
                              std::size_t max_group_size, std::uint64_t seed);

double huber_value_grad(const HuberInstance& inst, std::span<const double> x,
                        std::span<double> grad);
double glasso_value_grad(const GroupLassoInstance& inst,
                         std::span<const double> x, std::span<double> grad);

Problem make_problem(HuberInstance inst);
Problem make_problem(GroupLassoInstance inst);

/// Binary instance file, little-endian:
///   bytes 0..7   magic "CGMINST1"
///   u8           kind (0 = huber, 1 = glasso)
///   u64          m, n, n_groups (0 for huber), seed
///   f64          rho (0 for huber)
///   u64[n_groups] group sizes
///   f64[m*n]     A, column-major
///   f64[m]       b
void save_instance(const HuberInstance& inst, const std::string& path);
void save_instance(const GroupLassoInstance& inst, const std::string& path);

/// Loads either kind and wraps it as a Problem (x0 = 0).
Problem load_instance_problem(const std::string& path);

} // namespace cgmin
