#include "macs/runner.hpp"

namespace macs {

VerificationReport verify_scenario(const Scenario& scenario) {
  VerificationReport report;
  report.mode = scenario.mode;
  report.spanning_tree = has_leader_spanning_tree(scenario.graph);
  const LaplacianPartition part = laplacian(scenario.graph);
  report.m_matrix = is_nonsingular_m_matrix(part.l1);
  report.stabilizable = check_stabilizable(scenario.dynamics);
  report.controllable = check_controllable(scenario.dynamics);
  report.epsilon_valid = scenario.mode == GainMode::nominal || scenario.epsilon > 1.0;

  if (scenario.mode == GainMode::nominal) {
    for (std::size_t i = 0; i < scenario.initial_weights.size(); ++i) {
      if (scenario.initial_weights[i] == 0.0) {
        report.warnings.push_back("c" + std::to_string(i + 1) +
                                  "(0) = 0 is a boundary case; positive values are safer");
      }
    }
    report.passed = report.spanning_tree && report.m_matrix && report.stabilizable;
  } else {
    report.passed = report.spanning_tree && report.m_matrix && report.controllable &&
                    report.epsilon_valid;
  }
  return report;
}

void require_verified(const Scenario& scenario) {
  const VerificationReport report = verify_scenario(scenario);
  if (report.passed) return;
  if (!report.spanning_tree) {
    throw Error(ErrorCode::structural_assumption_failed,
                "graph has no leader-rooted spanning tree");
  }
  if (!report.m_matrix) {
    throw Error(ErrorCode::structural_assumption_failed, "L1 is not a nonsingular M-matrix");
  }
  if (scenario.mode == GainMode::nominal && !report.stabilizable) {
    throw Error(ErrorCode::synthesis_infeasible, "(A, B) is not stabilizable");
  }
  if (scenario.mode == GainMode::robust && !report.controllable) {
    throw Error(ErrorCode::synthesis_infeasible, "(A, B) is not controllable");
  }
  throw Error(ErrorCode::invalid_epsilon,
              "epsilon must be > 1, got " + std::to_string(scenario.epsilon));
}

GainSet synthesize_scenario(const Scenario& scenario) {
  if (scenario.mode == GainMode::nominal) {
    return synthesize_nominal(scenario.dynamics);
  }
  return synthesize_robust(scenario.dynamics, scenario.epsilon);
}

AnalysisResult analyze_scenario(const Scenario& scenario) {
  if (scenario.mode != GainMode::robust) {
    throw Error(ErrorCode::mode_mismatch, "bound analysis applies to robust scenarios only");
  }
  require_verified(scenario);
  const LaplacianPartition part = laplacian(scenario.graph);
  AnalysisResult result;
  result.certificate = diagonal_scaling(part.l1);
  const GainSet gains = synthesize_scenario(scenario);
  const Eigen::VectorXd phi =
      Eigen::Map<const Eigen::VectorXd>(scenario.phi.data(), scenario.phi.size());
  result.bound = ultimate_bound(result.certificate, gains, part.l1, phi,
                                disturbance_bound_vector(scenario));
  return result;
}

RunResult run_scenario(const Scenario& scenario) {
  require_verified(scenario);
  RunResult result;
  result.gains = synthesize_scenario(scenario);
  result.trajectory = simulate(scenario, result.gains);
  const LaplacianPartition part = laplacian(scenario.graph);
  result.consensus = summarize(result.trajectory, part,
                               scenario.metrics.convergence_threshold,
                               scenario.metrics.drift_threshold);
  if (scenario.mode == GainMode::robust) {
    AnalysisResult analysis;
    analysis.certificate = diagonal_scaling(part.l1);
    const Eigen::VectorXd phi =
        Eigen::Map<const Eigen::VectorXd>(scenario.phi.data(), scenario.phi.size());
    analysis.bound = ultimate_bound(analysis.certificate, result.gains, part.l1, phi,
                                    disturbance_bound_vector(scenario));
    result.analysis = std::move(analysis);
  }
  return result;
}

}  // namespace macs
