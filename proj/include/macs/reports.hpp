#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "macs/runner.hpp"

namespace macs {

nlohmann::json verification_report_json(const VerificationReport& report);

/// Synthesis report: mode, epsilon, P or Q, K, Gamma, residual_lambda_max.
nlohmann::json gain_report_json(const GainSet& gains, const AgentDynamics& dynamics);

/// Bound analysis report: g, lambda0, alpha, alpha_hat, delta, pi1, pi,
/// radius_sq, omega_bound.
nlohmann::json analysis_report_json(const AnalysisResult& analysis);

nlohmann::json consensus_report_json(const ConsensusReport& report, const Trajectory& traj);

/// Header row, then t, x{i}_{k} per agent/component, w{i} per follower,
/// xi_norm. Full double precision; identical trajectories give identical
/// bytes.
void write_trajectory_csv(const Trajectory& traj, const LaplacianPartition& part,
                          std::ostream& out);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace macs
