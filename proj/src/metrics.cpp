#include "macs/metrics.hpp"

#include <cmath>

namespace macs {

std::vector<Eigen::VectorXd> consensus_error(const Trajectory& traj,
                                             const LaplacianPartition& part) {
  const int n = traj.state_dim;
  const int followers = traj.agent_count - 1;
  if (part.l1.rows() != followers || part.l1.cols() != followers) {
    throw Error(ErrorCode::dimension_error, "partition does not match the trajectory");
  }
  std::vector<Eigen::VectorXd> xi;
  xi.reserve(traj.size());
  for (const auto& state : traj.states) {
    if (state.size() != static_cast<Eigen::Index>(traj.agent_count) * n) {
      throw Error(ErrorCode::dimension_error, "trajectory state has wrong dimension");
    }
    const Eigen::VectorXd x0 = state.segment(0, n);
    Eigen::VectorXd step = Eigen::VectorXd::Zero(followers * n);
    for (int i = 0; i < followers; ++i) {
      for (int j = 0; j < followers; ++j) {
        const double lij = part.l1(i, j);
        if (lij != 0.0) {
          step.segment(i * n, n) += lij * (state.segment((j + 1) * n, n) - x0);
        }
      }
    }
    xi.push_back(std::move(step));
  }
  return xi;
}

std::vector<DriftResult> detect_drift(const std::vector<double>& times,
                                      const std::vector<Eigen::VectorXd>& weights,
                                      double threshold) {
  if (times.size() != weights.size() || times.size() < 2) {
    throw Error(ErrorCode::insufficient_data, "need at least two samples");
  }
  const double t_begin = times.front();
  const double t_end = times.back();
  const double window_start = t_begin + 0.5 * (t_end - t_begin);
  std::size_t first = 0;
  while (first < times.size() && times[first] < window_start) ++first;
  const std::size_t count = times.size() - first;
  if (count < 2) {
    throw Error(ErrorCode::insufficient_data, "fewer than two samples in the final half window");
  }

  double t_mean = 0.0;
  for (std::size_t k = first; k < times.size(); ++k) t_mean += times[k];
  t_mean /= static_cast<double>(count);
  double tt = 0.0;
  for (std::size_t k = first; k < times.size(); ++k) {
    tt += (times[k] - t_mean) * (times[k] - t_mean);
  }

  const int followers = static_cast<int>(weights.front().size());
  std::vector<DriftResult> results(followers);
  for (int i = 0; i < followers; ++i) {
    double w_mean = 0.0;
    for (std::size_t k = first; k < times.size(); ++k) w_mean += weights[k](i);
    w_mean /= static_cast<double>(count);
    double tw = 0.0;
    for (std::size_t k = first; k < times.size(); ++k) {
      tw += (times[k] - t_mean) * (weights[k](i) - w_mean);
    }
    results[i].slope = tt > 0.0 ? tw / tt : 0.0;
    results[i].drifting = results[i].slope > threshold;
  }
  return results;
}

ConsensusReport summarize(const Trajectory& traj, const LaplacianPartition& part,
                          double convergence_threshold, double drift_threshold) {
  const auto xi = consensus_error(traj, part);
  ConsensusReport report;
  report.times = traj.times;
  report.convergence_threshold = convergence_threshold;
  report.drift_threshold = drift_threshold;
  report.xi_norm_series.reserve(xi.size());
  for (const auto& v : xi) report.xi_norm_series.push_back(v.norm());
  report.final_xi_norm = report.xi_norm_series.back();

  // Earliest recorded time after which the error stays below threshold.
  std::size_t cut = xi.size();
  while (cut > 0 && report.xi_norm_series[cut - 1] < convergence_threshold) --cut;
  if (cut < xi.size()) {
    report.convergence_time = traj.times[cut];
  } else {
    report.convergence_time.reset();
  }

  report.weight_final = traj.weights.back();
  const auto drift = detect_drift(traj.times, traj.weights, drift_threshold);
  report.weight_drift_slope.resize(static_cast<Eigen::Index>(drift.size()));
  report.drifting.resize(drift.size());
  for (std::size_t i = 0; i < drift.size(); ++i) {
    report.weight_drift_slope(static_cast<Eigen::Index>(i)) = drift[i].slope;
    report.drifting[i] = drift[i].drifting;
  }

  const double t_begin = traj.times.front();
  const double t_end = traj.times.back();
  const double tail_start = t_begin + 0.8 * (t_end - t_begin);
  double tail_sup = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.times[k] >= tail_start) {
      tail_sup = std::max(tail_sup, report.xi_norm_series[k] * report.xi_norm_series[k]);
    }
  }
  report.empirical_tail_bound = tail_sup;
  return report;
}

}  // namespace macs
