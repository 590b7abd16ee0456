#include "macs/analysis.hpp"

#include <cmath>

#include "macs/linalg.hpp"
#include "macs/metrics.hpp"

namespace macs {

namespace {

Eigen::MatrixXd scaled_form(const Eigen::VectorXd& g, const Eigen::MatrixXd& l1) {
  const Eigen::MatrixXd gl = g.asDiagonal() * l1;
  return gl + gl.transpose();
}

// Projected gradient ascent on lambda_min(G L1 + L1^T G) over g > 0.
// lambda_min is 1-homogeneous in g, so g is kept normalized.
bool scaling_ascent(const Eigen::MatrixXd& l1, Eigen::VectorXd& g, double& lambda0) {
  const Eigen::Index nf = l1.rows();
  g /= g.maxCoeff();
  double step = 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled_form(g, l1));
  lambda0 = eig.eigenvalues()(0);
  for (int iter = 0; iter < 2000 && lambda0 <= 1e-10; ++iter) {
    const Eigen::VectorXd u = eig.eigenvectors().col(0);
    const Eigen::VectorXd lu = l1 * u;
    Eigen::VectorXd grad(nf);
    for (Eigen::Index i = 0; i < nf; ++i) grad(i) = 2.0 * u(i) * lu(i);

    Eigen::VectorXd candidate = (g + step * grad).cwiseMax(1e-10);
    candidate /= candidate.maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> trial(scaled_form(candidate, l1));
    if (trial.eigenvalues()(0) > lambda0) {
      g = candidate;
      eig = trial;
      lambda0 = trial.eigenvalues()(0);
      step *= 1.5;
    } else {
      step *= 0.5;
      if (step < 1e-14) break;
    }
  }
  return lambda0 > 1e-10;
}

std::vector<double> lyapunov_series(const Trajectory& traj, const LaplacianPartition& part,
                                    const ScalingCertificate& cert, const GainSet& gains,
                                    double alpha, GainMode expected_mode) {
  if (gains.mode != expected_mode || traj.mode != expected_mode) {
    throw Error(ErrorCode::mode_mismatch, "trajectory/gain mode does not match the Lyapunov form");
  }
  if (alpha <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "alpha must be positive");
  }
  const int followers = traj.agent_count - 1;
  if (cert.g.size() != followers) {
    throw Error(ErrorCode::dimension_error, "certificate does not match the trajectory");
  }
  const auto xi = consensus_error(traj, part);
  const int n = traj.state_dim;
  std::vector<double> series;
  series.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    double value = 0.0;
    for (int i = 0; i < followers; ++i) {
      const Eigen::VectorXd xi_i = xi[k].segment(i * n, n);
      const double rho = xi_i.dot(gains.lyapunov_inv * xi_i);
      const double w = traj.weights[k](i);
      value += 0.5 * cert.g(i) * (2.0 * w + rho) * rho;
      value += 0.5 * cert.lambda0 * (w - alpha) * (w - alpha);
    }
    series.push_back(value);
  }
  return series;
}

}  // namespace

ScalingCertificate diagonal_scaling(const Eigen::MatrixXd& l1) {
  if (!is_nonsingular_m_matrix(l1)) {
    throw Error(ErrorCode::not_m_matrix, "l1 is not a nonsingular M-matrix");
  }
  const Eigen::Index nf = l1.rows();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(nf);
  const Eigen::VectorXd q = l1.transpose().partialPivLu().solve(ones);
  const Eigen::VectorXd w = l1.partialPivLu().solve(ones);

  ScalingCertificate cert;
  std::vector<Eigen::VectorXd> candidates;
  if (q.minCoeff() > 0.0) {
    candidates.push_back(q.cwiseInverse());
    // The plain g = 1/q choice can be indefinite (long chains are the
    // typical failure); the row/column-sum ratio below is much sturdier.
    if (w.minCoeff() > 0.0) candidates.push_back((q.array() / w.array()).matrix());
  }
  for (const auto& g : candidates) {
    const double lambda0 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(scaled_form(g, l1))
                               .eigenvalues()(0);
    if (lambda0 > 0.0) {
      cert.g = g;
      cert.lambda0 = lambda0;
      return cert;
    }
  }

  cert.g = candidates.empty() ? ones : candidates.back();
  if (!scaling_ascent(l1, cert.g, cert.lambda0)) {
    throw Error(ErrorCode::scaling_not_found, "no positive-definite diagonal scaling found");
  }
  return cert;
}

double recommended_alpha(const ScalingCertificate& cert) {
  const double gmax = cert.g.maxCoeff();
  const double ratio = gmax / cert.lambda0;
  const double alpha_hat = 2.0 * ratio * ratio;
  const double alpha = alpha_hat + 0.5 * cert.lambda0 +
                       gmax * gmax / (2.0 * cert.lambda0 * cert.lambda0);
  return std::max(1.0 + 1e-6, alpha);
}

std::vector<double> lyapunov_v1(const Trajectory& traj, const LaplacianPartition& part,
                                const ScalingCertificate& cert, const GainSet& gains,
                                double alpha) {
  return lyapunov_series(traj, part, cert, gains, alpha, GainMode::nominal);
}

std::vector<double> lyapunov_v2(const Trajectory& traj, const LaplacianPartition& part,
                                const ScalingCertificate& cert, const GainSet& gains,
                                double alpha) {
  return lyapunov_series(traj, part, cert, gains, alpha, GainMode::robust);
}

BoundReport ultimate_bound(const ScalingCertificate& cert, const GainSet& gains,
                           const Eigen::MatrixXd& l1, const Eigen::VectorXd& phi,
                           const Eigen::VectorXd& upsilon) {
  if (gains.mode != GainMode::robust) {
    throw Error(ErrorCode::mode_mismatch, "ultimate bound requires robust-mode gains");
  }
  const Eigen::Index nf = l1.rows();
  if (cert.g.size() != nf || phi.size() != nf || upsilon.size() != nf + 1) {
    throw Error(ErrorCode::dimension_error, "certificate/phi/upsilon sizes do not match l1");
  }
  if (phi.minCoeff() <= 0.0) {
    throw Error(ErrorCode::invalid_leakage, "all phi must be positive");
  }
  if (upsilon.minCoeff() < 0.0) {
    throw Error(ErrorCode::invalid_argument, "upsilon entries must be nonnegative");
  }

  BoundReport report;
  report.alpha_hat = 2.0 * std::pow(cert.g.maxCoeff() / cert.lambda0, 2.0);
  report.alpha = recommended_alpha(cert);
  report.delta = gains.epsilon - 1.0;

  double omega_sq = 0.0;
  for (Eigen::Index i = 1; i <= nf; ++i) {
    omega_sq += (upsilon(i) + upsilon(0)) * (upsilon(i) + upsilon(0));
  }
  report.omega_bound = std::sqrt(omega_sq);

  const double sqrt_qinv_norm = std::sqrt(lambda_max_symmetric(gains.lyapunov_inv));
  const Eigen::VectorXd sqrt_phi_inv_g = (cert.g.array() / phi.array()).sqrt();
  const Eigen::VectorXd sqrt_g = cert.g.array().sqrt();
  const Eigen::VectorXd quarter_g = cert.g.array().pow(0.25);
  const double n1 = spectral_norm(sqrt_phi_inv_g.asDiagonal() * l1) * sqrt_qinv_norm;
  const double n2 = spectral_norm(sqrt_g.asDiagonal() * l1) * sqrt_qinv_norm;
  const double n3 = spectral_norm(quarter_g.asDiagonal() * l1) * sqrt_qinv_norm;

  const double am1 = report.alpha - 1.0;
  double pi1 = 0.0;
  for (Eigen::Index i = 0; i < nf; ++i) {
    pi1 += (16.0 / 27.0) * cert.lambda0 * phi(i) * am1 * am1 * am1;
  }
  const double w2 = report.omega_bound * report.omega_bound;
  pi1 += n1 * n1 * w2;
  pi1 += 2.0 * n2 * n2 * w2;
  pi1 += 2.0 * n3 * n3 * n3 * n3 * w2 * w2;
  report.pi1 = pi1;

  double pi = pi1;
  for (Eigen::Index i = 0; i < nf; ++i) {
    pi += 2.0 * cert.lambda0 * std::pow(report.delta, 3.0) / (27.0 * phi(i) * phi(i));
    pi += 0.5 * report.delta * cert.lambda0 * am1 * am1;
  }
  report.pi = pi;

  const double qinv_min = lambda_min_symmetric(gains.lyapunov_inv);
  report.radius_sq = 2.0 * report.pi / (qinv_min * cert.g.minCoeff());
  return report;
}

}  // namespace macs
