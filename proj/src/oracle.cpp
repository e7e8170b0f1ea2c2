#include "cgmin/oracle.hpp"

#include <stdexcept>

#include "cgmin/errors.hpp"

namespace cgmin::oracle {

namespace {

void check_dim(Eigen::Index n) {
  if (n < 1 || n > kMaxDim)
    throw std::invalid_argument("oracle: dimension out of range");
}

} // namespace

Eigen::VectorXd to_eigen(const DenseVector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

DenseVector from_eigen(const Eigen::VectorXd& v) {
  return DenseVector(v.data(), v.data() + v.size());
}

Eigen::MatrixXd assemble_Bt(const RestartMemory& mem) {
  const Eigen::VectorXd p = to_eigen(mem.p_t);
  const Eigen::VectorXd y = to_eigen(mem.y_t);
  check_dim(p.size());
  const auto n = p.size();
  return (mem.yty / mem.pty) *
         (Eigen::MatrixXd::Identity(n, n) - p * p.transpose() / mem.ptp +
          y * y.transpose() / mem.yty);
}

Eigen::MatrixXd assemble_Bk1(const RestartMemory& mem, const DenseVector& p_k,
                             const DenseVector& y_k) {
  const Eigen::MatrixXd Bt = assemble_Bt(mem);
  const Eigen::VectorXd p = to_eigen(p_k);
  const Eigen::VectorXd y = to_eigen(y_k);
  const Eigen::VectorXd Bp = Bt * p;
  return Bt - Bp * Bp.transpose() / p.dot(Bp) +
         y * y.transpose() / p.dot(y);
}

Eigen::MatrixXd assemble_Ht(const RestartMemory& mem) {
  const Eigen::VectorXd p = to_eigen(mem.p_t);
  const Eigen::VectorXd y = to_eigen(mem.y_t);
  check_dim(p.size());
  const auto n = p.size();
  const double s = mem.pty;
  return (s / mem.yty) *
             (Eigen::MatrixXd::Identity(n, n) -
              (p * y.transpose() + y * p.transpose()) / s +
              (mem.yty / s) * (p * p.transpose() / s)) +
         p * p.transpose() / s;
}

Eigen::MatrixXd assemble_memoryless(const DenseVector& p_k,
                                    const DenseVector& y_k) {
  const Eigen::VectorXd p = to_eigen(p_k);
  const Eigen::VectorXd y = to_eigen(y_k);
  check_dim(p.size());
  const auto n = p.size();
  const double s = p.dot(y);
  return Eigen::MatrixXd::Identity(n, n) -
         (y * p.transpose() + p * y.transpose()) / s +
         (1.0 + y.dot(y) / s) * (p * p.transpose() / s);
}

Eigen::MatrixXd assemble_scaled_H(const RestartMemory& mem,
                                  const DenseVector& p_k,
                                  const DenseVector& y_k) {
  const Eigen::MatrixXd Ht = assemble_Ht(mem);
  const Eigen::VectorXd p = to_eigen(p_k);
  const Eigen::VectorXd y = to_eigen(y_k);
  const double s = p.dot(y);
  const Eigen::VectorXd Hy = Ht * y;
  return Ht - (Hy * p.transpose() + p * Hy.transpose()) / s +
         (1.0 + y.dot(Hy) / s) * (p * p.transpose() / s);
}

Eigen::MatrixXd dense_inverse(const Eigen::MatrixXd& mtx) {
  check_dim(mtx.rows());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(mtx);
  if (!lu.isInvertible()) throw Singular("dense_inverse: singular matrix");
  return lu.inverse();
}

double condition_number(const Eigen::MatrixXd& mtx) {
  check_dim(mtx.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mtx,
                                                    Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0))
    throw Singular("condition_number: matrix is not positive definite");
  return hi / lo;
}

} // namespace cgmin::oracle
