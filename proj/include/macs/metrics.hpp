#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "macs/graph.hpp"
#include "macs/simulation.hpp"

namespace macs {

/// Per-follower tail-window fit of the adaptive weight.
struct DriftResult {
  double slope = 0.0;
  bool drifting = false;
};

/// Post-hoc summary of one trajectory.
struct ConsensusReport {
  std::vector<double> times;
  std::vector<double> xi_norm_series;
  double final_xi_norm = 0.0;
  std::optional<double> convergence_time;  // earliest t after which ||xi|| stays below threshold
  Eigen::VectorXd weight_final;
  Eigen::VectorXd weight_drift_slope;
  std::vector<bool> drifting;
  double empirical_tail_bound = 0.0;       // sup ||xi||^2 over the final 20% of the horizon
  double convergence_threshold = 0.0;
  double drift_threshold = 0.0;
};

/// Consensus error xi(t_k) = (L1 (x) I_n)(x - 1 (x) x0), evaluated
/// blockwise: xi_i = sum_j L1(i,j) (x_j - x_0).
std::vector<Eigen::VectorXd> consensus_error(const Trajectory& traj,
                                             const LaplacianPartition& part);

/// Least-squares slope of each follower's weight over the final half of
/// the horizon; drifting when the slope exceeds the threshold.
std::vector<DriftResult> detect_drift(const std::vector<double>& times,
                                      const std::vector<Eigen::VectorXd>& weights,
                                      double threshold = 1e-3);

ConsensusReport summarize(const Trajectory& traj, const LaplacianPartition& part,
                          double convergence_threshold = 1e-3,
                          double drift_threshold = 1e-3);

}  // namespace macs
