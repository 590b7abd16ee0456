#include "macs/protocol.hpp"

namespace macs {

Eigen::VectorXd relative_state(const Eigen::VectorXd& x_i,
                               const std::vector<Eigen::VectorXd>& neighbor_states) {
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(x_i.size());
  for (const auto& x_j : neighbor_states) {
    if (x_j.size() != x_i.size()) {
      throw Error(ErrorCode::incomplete_neighborhood,
                  "neighbor state dimension does not match the agent state");
    }
    xi += x_i - x_j;
  }
  return xi;
}

ControlResult control_nominal(const Eigen::VectorXd& xi, double c, const GainSet& gains) {
  if (gains.mode != GainMode::nominal) {
    throw Error(ErrorCode::mode_mismatch, "control_nominal needs nominal-mode gains");
  }
  if (xi.size() != gains.lyapunov.rows()) {
    throw Error(ErrorCode::dimension_error, "xi does not match the gain dimension");
  }
  ControlResult result;
  result.rho = xi.dot(gains.lyapunov_inv * xi);
  result.u = (c + result.rho) * (gains.k * xi);
  result.weight_dot = xi.dot(gains.gamma * xi);
  return result;
}

ControlResult control_robust(const Eigen::VectorXd& xi, double d, const GainSet& gains,
                             double phi) {
  if (gains.mode != GainMode::robust) {
    throw Error(ErrorCode::mode_mismatch, "control_robust needs robust-mode gains");
  }
  if (phi <= 0.0) {
    throw Error(ErrorCode::invalid_leakage, "phi must be positive");
  }
  if (xi.size() != gains.lyapunov.rows()) {
    throw Error(ErrorCode::dimension_error, "xi does not match the gain dimension");
  }
  ControlResult result;
  result.rho = xi.dot(gains.lyapunov_inv * xi);
  result.u = (d + result.rho) * (gains.k * xi);
  result.weight_dot = -phi * (d - 1.0) * (d - 1.0) + xi.dot(gains.gamma * xi);
  return result;
}

}  // namespace macs
