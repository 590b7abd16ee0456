#pragma once

#include <Eigen/Dense>

#include "macs/error.hpp"

namespace macs {

/// Principal symmetric inverse of an SPD matrix via eigendecomposition.
/// Throws NumericalFailure if the matrix is not (numerically) SPD.
Eigen::MatrixXd symmetric_inverse(const Eigen::MatrixXd& m);

/// Principal PSD square root of a symmetric PSD matrix.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m);

/// Largest eigenvalue of (m + m^T) / 2.
double lambda_max_symmetric(const Eigen::MatrixXd& m);

/// Smallest eigenvalue of (m + m^T) / 2.
double lambda_min_symmetric(const Eigen::MatrixXd& m);

/// Operator 2-norm (largest singular value).
double spectral_norm(const Eigen::MatrixXd& m);

/// Solves A^T X + X A = W (W symmetric) by the dense Kronecker
/// expansion; sized for small n.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& w);

}  // namespace macs
