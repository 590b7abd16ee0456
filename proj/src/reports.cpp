#include "macs/reports.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "macs/metrics.hpp"

namespace macs {

using nlohmann::json;

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

void append_value(std::string& line, double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  line += buffer;
}

}  // namespace

json verification_report_json(const VerificationReport& report) {
  json doc;
  doc["mode"] = gain_mode_name(report.mode);
  doc["spanning_tree"] = report.spanning_tree;
  doc["m_matrix"] = report.m_matrix;
  doc["stabilizable"] = report.stabilizable;
  doc["controllable"] = report.controllable;
  doc["epsilon_valid"] = report.epsilon_valid;
  doc["passed"] = report.passed;
  doc["warnings"] = report.warnings;
  return doc;
}

json gain_report_json(const GainSet& gains, const AgentDynamics& dynamics) {
  json doc;
  doc["mode"] = gain_mode_name(gains.mode);
  doc["epsilon"] = gains.epsilon;
  doc[gains.mode == GainMode::nominal ? "P" : "Q"] = matrix_json(gains.lyapunov);
  doc["K"] = matrix_json(gains.k);
  doc["Gamma"] = matrix_json(gains.gamma);
  doc["residual_lambda_max"] = lmi_residual(gains, dynamics);
  return doc;
}

json analysis_report_json(const AnalysisResult& analysis) {
  json doc;
  doc["g"] = vector_json(analysis.certificate.g);
  doc["lambda0"] = analysis.certificate.lambda0;
  doc["alpha"] = analysis.bound.alpha;
  doc["alpha_hat"] = analysis.bound.alpha_hat;
  doc["delta"] = analysis.bound.delta;
  doc["pi1"] = analysis.bound.pi1;
  doc["pi"] = analysis.bound.pi;
  doc["radius_sq"] = analysis.bound.radius_sq;
  doc["omega_bound"] = analysis.bound.omega_bound;
  return doc;
}

json consensus_report_json(const ConsensusReport& report, const Trajectory& traj) {
  json doc;
  doc["final_xi_norm"] = report.final_xi_norm;
  if (report.convergence_time.has_value()) {
    doc["convergence_time"] = *report.convergence_time;
  } else {
    doc["convergence_time"] = nullptr;
  }
  doc["weight_final"] = vector_json(report.weight_final);
  doc["weight_drift_slope"] = vector_json(report.weight_drift_slope);
  doc["drifting"] = report.drifting;
  doc["empirical_tail_bound"] = report.empirical_tail_bound;
  doc["convergence_threshold"] = report.convergence_threshold;
  doc["drift_threshold"] = report.drift_threshold;
  doc["times"] = report.times;
  doc["xi_norm_series"] = report.xi_norm_series;

  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016" PRIx64, traj.scenario_hash);
  doc["scenario_hash"] = hash;
  doc["dt"] = traj.dt;
  doc["mode"] = gain_mode_name(traj.mode);
  return doc;
}

void write_trajectory_csv(const Trajectory& traj, const LaplacianPartition& part,
                          std::ostream& out) {
  const auto xi = consensus_error(traj, part);
  const int n = traj.state_dim;
  const int followers = traj.agent_count - 1;

  std::string line = "t";
  for (int i = 0; i < traj.agent_count; ++i) {
    for (int k = 1; k <= n; ++k) {
      line += ",x" + std::to_string(i) + "_" + std::to_string(k);
    }
  }
  for (int i = 1; i <= followers; ++i) line += ",w" + std::to_string(i);
  line += ",xi_norm\n";
  out << line;

  for (std::size_t row = 0; row < traj.size(); ++row) {
    line.clear();
    append_value(line, traj.times[row]);
    for (Eigen::Index k = 0; k < traj.states[row].size(); ++k) {
      line += ',';
      append_value(line, traj.states[row](k));
    }
    for (Eigen::Index k = 0; k < traj.weights[row].size(); ++k) {
      line += ',';
      append_value(line, traj.weights[row](k));
    }
    line += ',';
    append_value(line, xi[row].norm());
    line += '\n';
    out << line;
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
  }
  out << content;
  if (!out) {
    throw Error(ErrorCode::io_error, "failed while writing '" + path + "'");
  }
}

}  // namespace macs
