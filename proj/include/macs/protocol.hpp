#pragma once

#include <vector>

#include <Eigen/Dense>

#include "macs/synthesis.hpp"

namespace macs {

/// Output of one follower's control law evaluation.
struct ControlResult {
  Eigen::VectorXd u;  // length p
  double weight_dot;  // c_dot (nominal) or d_dot (robust)
  double rho;         // xi^T M^{-1} xi with M = P or Q
};

/// xi_i = sum over in-neighbors j of (x_i - x_j). The caller supplies
/// exactly the states of the in-neighborhood; nothing global enters.
Eigen::VectorXd relative_state(const Eigen::VectorXd& x_i,
                               const std::vector<Eigen::VectorXd>& neighbor_states);

/// Nominal law: u = (c + rho) K xi, c_dot = xi^T Gamma xi.
ControlResult control_nominal(const Eigen::VectorXd& xi, double c, const GainSet& gains);

/// Robust law: u = (d + rho) K xi, d_dot = -phi (d - 1)^2 + xi^T Gamma xi.
ControlResult control_robust(const Eigen::VectorXd& xi, double d, const GainSet& gains,
                             double phi);

}  // namespace macs
