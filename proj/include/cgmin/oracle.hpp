#pragma once

// Dense small-n oracle used to verify the vector-only formulas. Never linked
// into the solver targets; everything here materializes n-by-n matrices.

#include <Eigen/Dense>

#include "cgmin/cgm.hpp"

namespace cgmin::oracle {

/// Matrices beyond this size are test abuse, not verification.
inline constexpr int kMaxDim = 512;

Eigen::VectorXd to_eigen(const DenseVector& v);
DenseVector from_eigen(const Eigen::VectorXd& v);

/// Restart Hessian estimate B_t = (y'y/p'y)(I - pp'/p'p + yy'/y'y).
Eigen::MatrixXd assemble_Bt(const RestartMemory& mem);

/// One BFGS update of B_t by the pair (p_k, y_k).
Eigen::MatrixXd assemble_Bk1(const RestartMemory& mem, const DenseVector& p_k,
                             const DenseVector& y_k);

/// Scaled restart inverse H_t (the dense counterpart of dir_restart).
Eigen::MatrixXd assemble_Ht(const RestartMemory& mem);

/// Plain memoryless inverse update of I by (p_k, y_k).
Eigen::MatrixXd assemble_memoryless(const DenseVector& p_k,
                                    const DenseVector& y_k);

/// Inverse update of H_t by (p_k, y_k) (dense counterpart of dir_scaled).
Eigen::MatrixXd assemble_scaled_H(const RestartMemory& mem,
                                  const DenseVector& p_k,
                                  const DenseVector& y_k);

/// Dense inverse via full-pivot LU; throws Singular on rank deficiency.
Eigen::MatrixXd dense_inverse(const Eigen::MatrixXd& mtx);

/// Condition number of a symmetric positive definite matrix via its
/// eigenvalues; throws Singular when the smallest eigenvalue is not positive.
double condition_number(const Eigen::MatrixXd& mtx);

} // namespace cgmin::oracle
