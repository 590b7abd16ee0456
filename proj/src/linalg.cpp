#include "macs/linalg.hpp"

namespace macs {

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> symmetric_eig(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::dimension_error, "matrix must be square");
  }
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical_failure, "symmetric eigendecomposition failed");
  }
  return eig;
}

}  // namespace

Eigen::MatrixXd symmetric_inverse(const Eigen::MatrixXd& m) {
  const auto eig = symmetric_eig(m);
  const double max_abs = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (eig.eigenvalues().minCoeff() <= 1e-14 * (1.0 + max_abs)) {
    throw Error(ErrorCode::numerical_failure, "matrix is not positive definite");
  }
  const Eigen::MatrixXd inv = eig.eigenvectors() *
                              eig.eigenvalues().cwiseInverse().asDiagonal() *
                              eig.eigenvectors().transpose();
  return 0.5 * (inv + inv.transpose());
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m) {
  const auto eig = symmetric_eig(m);
  const double max_abs = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (eig.eigenvalues().minCoeff() < -1e-10 * (1.0 + max_abs)) {
    throw Error(ErrorCode::numerical_failure, "matrix is not positive semidefinite");
  }
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd root = eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (root + root.transpose());
}

double lambda_max_symmetric(const Eigen::MatrixXd& m) {
  return symmetric_eig(m).eigenvalues().maxCoeff();
}

double lambda_min_symmetric(const Eigen::MatrixXd& m) {
  return symmetric_eig(m).eigenvalues().minCoeff();
}

double spectral_norm(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().maxCoeff();
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& w) {
  if (a.rows() != a.cols() || w.rows() != w.cols() || a.rows() != w.rows()) {
    throw Error(ErrorCode::dimension_error, "Lyapunov operands must be square and matched");
  }
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(n * n, n * n);
  // vec(A^T X) = (I kron A^T) vec(X), vec(X A) = (A^T kron I) vec(X)
  for (Eigen::Index j = 0; j < n; ++j) {
    coeff.block(j * n, j * n, n, n) += a.transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      coeff.block(j * n, i * n, n, n) += a(i, j) * eye;
    }
  }
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(w.data(), n * n);
  const Eigen::VectorXd sol = coeff.partialPivLu().solve(rhs);
  const Eigen::MatrixXd x = Eigen::Map<const Eigen::MatrixXd>(sol.data(), n, n);
  return 0.5 * (x + x.transpose());
}

}  // namespace macs
