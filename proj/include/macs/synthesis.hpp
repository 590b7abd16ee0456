#pragma once

#include <Eigen/Dense>

#include "macs/error.hpp"

namespace macs {

/// Identical LTI agent dynamics x_dot = A x + B u.
struct AgentDynamics {
  Eigen::MatrixXd a;  // n x n
  Eigen::MatrixXd b;  // n x p

  AgentDynamics() = default;
  AgentDynamics(Eigen::MatrixXd a_mat, Eigen::MatrixXd b_mat);

  int state_dim() const { return static_cast<int>(a.rows()); }
  int input_dim() const { return static_cast<int>(b.cols()); }
};

enum class GainMode { nominal, robust };

const char* gain_mode_name(GainMode mode);

/// Feedback gains for either adaptive protocol. `lyapunov` is the LMI
/// solution (P in nominal mode, Q in robust mode); its inverse is cached
/// once so per-step rho evaluations never re-invert.
struct GainSet {
  GainMode mode = GainMode::nominal;
  double epsilon = 0.0;           // 0 in nominal mode, > 1 in robust mode
  Eigen::MatrixXd lyapunov;       // n x n SPD
  Eigen::MatrixXd lyapunov_inv;   // symmetric inverse of `lyapunov`
  Eigen::MatrixXd k;              // p x n
  Eigen::MatrixXd gamma;          // n x n symmetric PSD
};

/// Builds the full gain set from a given SPD LMI solution:
/// K = -B^T M^{-1}, Gamma = M^{-1} B B^T M^{-1}. The inverse is the
/// principal symmetric one, via eigendecomposition.
GainSet make_gain_set(const Eigen::MatrixXd& lyapunov, GainMode mode, double epsilon,
                      const AgentDynamics& dynamics);

/// PBH test: rank [A - lambda I, B] = n for every eigenvalue with
/// Re(lambda) >= 0 (singular-value rank, tolerance 1e-8 * sigma_max).
bool check_stabilizable(const AgentDynamics& dynamics);

/// Kalman test: rank [B, AB, ..., A^{n-1}B] = n via singular values.
bool check_controllable(const AgentDynamics& dynamics);

/// Stabilizing solution X > 0 of  A^T X + X A - 2 X B B^T X + I = 0,
/// via ordered Schur of the Hamiltonian [[A, -2BB^T], [-I, -A^T]] with a
/// Newton-Kleinman refinement fallback.
Eigen::MatrixXd solve_care(const Eigen::MatrixXd& a_mat, const Eigen::MatrixXd& b_mat);

/// Nominal design: P = X^{-1} solves P A^T + A P - 2 B B^T < 0.
GainSet synthesize_nominal(const AgentDynamics& dynamics);

/// Robust design for epsilon > 1: Q = X^{-1} with X the stabilizing
/// solution for the shifted pair (A + (epsilon/2) I, B), so that
/// A Q + Q A^T + epsilon Q - 2 B B^T < 0.
GainSet synthesize_robust(const AgentDynamics& dynamics, double epsilon);

/// Largest eigenvalue of the LMI left-hand side for the gain set's mode:
/// P A^T + A P - 2 B B^T (nominal) or A Q + Q A^T + eps Q - 2 B B^T (robust).
double lmi_residual(const GainSet& gains, const AgentDynamics& dynamics);

}  // namespace macs
