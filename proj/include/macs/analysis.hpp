#pragma once

#include <vector>

#include <Eigen/Dense>

#include "macs/graph.hpp"
#include "macs/simulation.hpp"
#include "macs/synthesis.hpp"

namespace macs {

/// Diagonal scaling G = diag(g) with G L1 + L1^T G positive definite;
/// lambda0 is the smallest eigenvalue of that matrix.
struct ScalingCertificate {
  Eigen::VectorXd g;
  double lambda0 = 0.0;
};

/// Constants of the ultimate-bound set for the robust protocol.
struct BoundReport {
  double alpha = 0.0;
  double alpha_hat = 0.0;
  double delta = 0.0;
  double pi1 = 0.0;
  double pi = 0.0;
  double radius_sq = 0.0;     // bound on ||xi||^2
  double omega_bound = 0.0;   // bound on the stacked disturbance norm
};

/// Builds the certificate from q = (L1^T)^{-1} 1, g_i = 1/q_i, then
/// verifies positive definiteness numerically. A gradient ascent on
/// lambda_min over g > 0 is the fallback when verification fails.
ScalingCertificate diagonal_scaling(const Eigen::MatrixXd& l1);

/// Smallest alpha compatible with the boundedness analysis:
/// max(1 + 1e-6, alpha_hat + lambda0/2 + max g_i^2 / (2 lambda0^2)) with
/// alpha_hat = 2 (max g_i / lambda0)^2.
double recommended_alpha(const ScalingCertificate& cert);

/// V1(t_k) = sum_i g_i (2 c_i + rho_i) rho_i / 2 + (lambda0/2) sum_i (c_i - alpha)^2
/// along a nominal-protocol trajectory.
std::vector<double> lyapunov_v1(const Trajectory& traj, const LaplacianPartition& part,
                                const ScalingCertificate& cert, const GainSet& gains,
                                double alpha);

/// Same quadratic form along a robust-protocol trajectory (weights d_i).
std::vector<double> lyapunov_v2(const Trajectory& traj, const LaplacianPartition& part,
                                const ScalingCertificate& cert, const GainSet& gains,
                                double alpha);

/// Offline evaluation of the theoretical convergence set: the proof's
/// disturbance norms are upper-bounded by operator norms times the
/// amplitude bound, making every constant computable without simulating.
/// `upsilon` is [v0, v1, ..., vN].
BoundReport ultimate_bound(const ScalingCertificate& cert, const GainSet& gains,
                           const Eigen::MatrixXd& l1, const Eigen::VectorXd& phi,
                           const Eigen::VectorXd& upsilon);

}  // namespace macs
