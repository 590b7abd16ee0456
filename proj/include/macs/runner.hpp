#pragma once

#include <optional>
#include <string>
#include <vector>

#include "macs/analysis.hpp"
#include "macs/metrics.hpp"
#include "macs/scenario.hpp"

namespace macs {

/// Structural and existence checks for a scenario, as surfaced by the
/// verify command. `passed` covers the checks required by the scenario's
/// mode (spanning tree + M-matrix always; stabilizability for nominal,
/// controllability and epsilon > 1 for robust).
struct VerificationReport {
  GainMode mode = GainMode::nominal;
  bool spanning_tree = false;
  bool m_matrix = false;
  bool stabilizable = false;
  bool controllable = false;
  bool epsilon_valid = false;
  bool passed = false;
  std::vector<std::string> warnings;
};

struct AnalysisResult {
  ScalingCertificate certificate;
  BoundReport bound;
};

struct RunResult {
  GainSet gains;
  Trajectory trajectory;
  ConsensusReport consensus;
  std::optional<AnalysisResult> analysis;  // robust mode only
};

VerificationReport verify_scenario(const Scenario& scenario);

/// Runs verification and raises the error matching the first failed check.
void require_verified(const Scenario& scenario);

GainSet synthesize_scenario(const Scenario& scenario);

/// Diagonal scaling plus the theoretical bound constants, with the
/// disturbance amplitude bounds derived from the scenario's models.
AnalysisResult analyze_scenario(const Scenario& scenario);

/// verify -> synthesize -> simulate -> summarize (+ analyze when robust).
RunResult run_scenario(const Scenario& scenario);

}  // namespace macs
