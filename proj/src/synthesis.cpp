#include "macs/synthesis.hpp"

#include <complex>
#include <string>

#include "macs/linalg.hpp"

namespace macs {

namespace {

constexpr double kRankTolerance = 1e-8;
constexpr double kCareTolerance = 1e-8;

double care_residual_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& bbt,
                          const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd residual = a.transpose() * x + x * a - 2.0 * x * bbt * x +
                                   Eigen::MatrixXd::Identity(a.rows(), a.cols());
  return residual.norm();
}

bool is_hurwitz(const Eigen::MatrixXd& m) {
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(m, /*computeEigenvectors=*/false);
  return eig.eigenvalues().real().maxCoeff() < 0.0;
}

bool care_solution_valid(const Eigen::MatrixXd& a, const Eigen::MatrixXd& bbt,
                         const Eigen::MatrixXd& x) {
  if (!x.allFinite()) return false;
  if (care_residual_norm(a, bbt, x) > kCareTolerance * (1.0 + x.norm())) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x);
  if (eig.eigenvalues().minCoeff() <= 0.0) return false;
  return is_hurwitz(a - 2.0 * bbt * x);
}

// Swaps the adjacent diagonal entries t(i,i), t(i+1,i+1) of an upper
// triangular complex Schur form by a unitary similarity, updating u.
void swap_schur_entries(Eigen::MatrixXcd& t, Eigen::MatrixXcd& u, Eigen::Index i) {
  using Complex = std::complex<double>;
  const Complex a = t(i, i);
  const Complex b = t(i, i + 1);
  const Complex d = t(i + 1, i + 1);
  // Eigenvector of [[a, b], [0, d]] for eigenvalue d is [b, d - a]^T.
  Eigen::Vector2cd v;
  v << b, d - a;
  const double nv = v.norm();
  if (nv == 0.0) return;  // equal eigenvalues, order irrelevant
  Eigen::Matrix2cd g;
  g << v(0) / nv, -std::conj(v(1)) / nv,
       v(1) / nv,  std::conj(v(0)) / nv;
  const Eigen::Index m = t.rows();
  t.block(i, 0, 2, m) = (g.adjoint() * t.block(i, 0, 2, m)).eval();
  t.block(0, i, m, 2) = (t.block(0, i, m, 2) * g).eval();
  u.block(0, i, u.rows(), 2) = (u.block(0, i, u.rows(), 2) * g).eval();
  t(i + 1, i) = 0.0;
}

// Bubbles every eigenvalue with negative real part to the leading block.
void order_stable_first(Eigen::MatrixXcd& t, Eigen::MatrixXcd& u) {
  const Eigen::Index m = t.rows();
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
      const bool top_stable = t(i, i).real() < 0.0;
      const bool bottom_stable = t(i + 1, i + 1).real() < 0.0;
      if (!top_stable && bottom_stable) {
        swap_schur_entries(t, u, i);
        swapped = true;
      }
    }
  }
}

// Stable-invariant-subspace solve via ordered complex Schur of the
// Hamiltonian. Throws NumericalFailure when the stable/antistable split
// does not come out n/n.
Eigen::MatrixXd care_via_schur(const Eigen::MatrixXd& a, const Eigen::MatrixXd& bbt) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd hamiltonian(2 * n, 2 * n);
  hamiltonian << a, -2.0 * bbt,
                 -Eigen::MatrixXd::Identity(n, n), -a.transpose();

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(hamiltonian.cast<std::complex<double>>());
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical_failure, "Schur decomposition of the Hamiltonian failed");
  }
  Eigen::MatrixXcd t = schur.matrixT();
  Eigen::MatrixXcd u = schur.matrixU();
  order_stable_first(t, u);

  Eigen::Index stable = 0;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (t(i, i).real() < 0.0) ++stable;
  }
  if (stable != n) {
    throw Error(ErrorCode::numerical_failure,
                "Hamiltonian eigenvalue split is degenerate (" + std::to_string(stable) +
                    " stable of " + std::to_string(2 * n) + ")");
  }

  const Eigen::MatrixXcd u1 = u.topLeftCorner(n, n);
  const Eigen::MatrixXcd u2 = u.bottomLeftCorner(n, n);
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(u1);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::numerical_failure, "stable subspace basis is singular");
  }
  const Eigen::MatrixXd x = (u2 * lu.inverse()).real();
  return 0.5 * (x + x.transpose());
}

// Newton-Kleinman refinement from an initial guess.
Eigen::MatrixXd care_newton_refine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& bbt,
                                   Eigen::MatrixXd x) {
  const Eigen::Index n = a.rows();
  for (int iter = 0; iter < 50; ++iter) {
    if (care_solution_valid(a, bbt, x)) return x;
    const Eigen::MatrixXd a_closed = a - 2.0 * bbt * x;
    const Eigen::MatrixXd w = -(Eigen::MatrixXd::Identity(n, n) + 2.0 * x * bbt * x);
    const Eigen::MatrixXd next = solve_lyapunov(a_closed, w);
    if (!next.allFinite()) break;
    if ((next - x).norm() <= 1e-14 * (1.0 + x.norm())) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

}  // namespace

AgentDynamics::AgentDynamics(Eigen::MatrixXd a_mat, Eigen::MatrixXd b_mat)
    : a(std::move(a_mat)), b(std::move(b_mat)) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw Error(ErrorCode::dimension_error, "A must be square with n >= 1");
  }
  if (b.rows() != a.rows() || b.cols() < 1) {
    throw Error(ErrorCode::dimension_error, "B must be n x p with p >= 1");
  }
}

const char* gain_mode_name(GainMode mode) {
  return mode == GainMode::nominal ? "nominal" : "robust";
}

GainSet make_gain_set(const Eigen::MatrixXd& lyapunov, GainMode mode, double epsilon,
                      const AgentDynamics& dynamics) {
  if (lyapunov.rows() != dynamics.state_dim() || lyapunov.cols() != dynamics.state_dim()) {
    throw Error(ErrorCode::dimension_error, "Lyapunov matrix does not match the state dimension");
  }
  if (mode == GainMode::robust && epsilon <= 1.0) {
    throw Error(ErrorCode::invalid_epsilon, "robust mode requires epsilon > 1");
  }
  GainSet gains;
  gains.mode = mode;
  gains.epsilon = mode == GainMode::robust ? epsilon : 0.0;
  gains.lyapunov = 0.5 * (lyapunov + lyapunov.transpose());
  gains.lyapunov_inv = symmetric_inverse(gains.lyapunov);
  gains.k = -dynamics.b.transpose() * gains.lyapunov_inv;
  const Eigen::MatrixXd gamma =
      gains.lyapunov_inv * (dynamics.b * dynamics.b.transpose()) * gains.lyapunov_inv;
  gains.gamma = 0.5 * (gamma + gamma.transpose());
  return gains;
}

bool check_stabilizable(const AgentDynamics& dynamics) {
  const Eigen::Index n = dynamics.state_dim();
  const Eigen::Index p = dynamics.input_dim();
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(dynamics.a, /*computeEigenvectors=*/false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> lambda = eig.eigenvalues()(i);
    if (lambda.real() < -1e-9) continue;
    Eigen::MatrixXcd pencil(n, n + p);
    pencil << dynamics.a.cast<std::complex<double>>() -
                  lambda * Eigen::MatrixXcd::Identity(n, n),
        dynamics.b.cast<std::complex<double>>();
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pencil);
    const auto& sigma = svd.singularValues();
    if (sigma(n - 1) <= kRankTolerance * sigma(0)) return false;
  }
  return true;
}

bool check_controllable(const AgentDynamics& dynamics) {
  const Eigen::Index n = dynamics.state_dim();
  const Eigen::Index p = dynamics.input_dim();
  Eigen::MatrixXd ctrb(n, n * p);
  Eigen::MatrixXd block = dynamics.b;
  for (Eigen::Index i = 0; i < n; ++i) {
    ctrb.middleCols(i * p, p) = block;
    block = dynamics.a * block;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(ctrb);
  const auto& sigma = svd.singularValues();
  if (sigma(0) <= 0.0) return false;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > kRankTolerance * sigma(0)) ++rank;
  }
  return rank == n;
}

Eigen::MatrixXd solve_care(const Eigen::MatrixXd& a_mat, const Eigen::MatrixXd& b_mat) {
  if (a_mat.rows() != a_mat.cols() || b_mat.rows() != a_mat.rows()) {
    throw Error(ErrorCode::dimension_error, "inconsistent CARE dimensions");
  }
  if (!check_stabilizable(AgentDynamics(a_mat, b_mat))) {
    throw Error(ErrorCode::synthesis_infeasible, "(A, B) is not stabilizable");
  }
  const Eigen::MatrixXd bbt = b_mat * b_mat.transpose();
  Eigen::MatrixXd x = care_via_schur(a_mat, bbt);
  if (!care_solution_valid(a_mat, bbt, x)) {
    x = care_newton_refine(a_mat, bbt, x);
  }
  if (!care_solution_valid(a_mat, bbt, x)) {
    throw Error(ErrorCode::numerical_failure, "CARE solution failed verification");
  }
  return x;
}

GainSet synthesize_nominal(const AgentDynamics& dynamics) {
  if (!check_stabilizable(dynamics)) {
    throw Error(ErrorCode::synthesis_infeasible,
                "nominal synthesis requires (A, B) stabilizable");
  }
  const Eigen::MatrixXd x = solve_care(dynamics.a, dynamics.b);
  GainSet gains = make_gain_set(symmetric_inverse(x), GainMode::nominal, 0.0, dynamics);
  if (lmi_residual(gains, dynamics) >= 0.0) {
    throw Error(ErrorCode::numerical_failure, "synthesized P does not satisfy the strict LMI");
  }
  return gains;
}

GainSet synthesize_robust(const AgentDynamics& dynamics, double epsilon) {
  if (epsilon <= 1.0) {
    throw Error(ErrorCode::invalid_epsilon,
                "epsilon must be > 1, got " + std::to_string(epsilon));
  }
  if (!check_controllable(dynamics)) {
    throw Error(ErrorCode::synthesis_infeasible,
                "robust synthesis requires (A, B) controllable");
  }
  const Eigen::MatrixXd shifted =
      dynamics.a + 0.5 * epsilon * Eigen::MatrixXd::Identity(dynamics.state_dim(), dynamics.state_dim());
  const Eigen::MatrixXd x = solve_care(shifted, dynamics.b);
  GainSet gains = make_gain_set(symmetric_inverse(x), GainMode::robust, epsilon, dynamics);
  if (lmi_residual(gains, dynamics) >= 0.0) {
    throw Error(ErrorCode::numerical_failure, "synthesized Q does not satisfy the strict LMI");
  }
  return gains;
}

double lmi_residual(const GainSet& gains, const AgentDynamics& dynamics) {
  if (gains.lyapunov.rows() != dynamics.state_dim()) {
    throw Error(ErrorCode::dimension_error, "gain set does not match the dynamics");
  }
  const Eigen::MatrixXd bbt = dynamics.b * dynamics.b.transpose();
  Eigen::MatrixXd lhs;
  if (gains.mode == GainMode::nominal) {
    lhs = gains.lyapunov * dynamics.a.transpose() + dynamics.a * gains.lyapunov - 2.0 * bbt;
  } else {
    lhs = dynamics.a * gains.lyapunov + gains.lyapunov * dynamics.a.transpose() +
          gains.epsilon * gains.lyapunov - 2.0 * bbt;
  }
  return lambda_max_symmetric(lhs);
}

}  // namespace macs
