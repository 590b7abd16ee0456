#include "macs/simulation.hpp"

#include <cmath>
#include <string>

namespace macs {

namespace {

constexpr double kDivergenceNorm = 1e12;

std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform_unit(std::uint64_t& state) {
  return static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
}

double component_sum(const std::vector<DisturbanceTerm>& terms, double t,
                     const Eigen::VectorXd& x) {
  double value = 0.0;
  for (const auto& term : terms) value += eval_term(term, t, x);
  return value;
}

double component_bound(const std::vector<DisturbanceTerm>& terms) {
  double bound = 0.0;
  for (const auto& term : terms) bound += std::abs(term.amplitude);
  return bound;
}

}  // namespace

double eval_term(const DisturbanceTerm& term, double t, const Eigen::VectorXd& x) {
  switch (term.kind) {
    case TermKind::sine:
      return term.amplitude * std::sin(term.frequency * t + term.phase);
    case TermKind::cosine:
      return term.amplitude * std::cos(term.frequency * t + term.phase);
    case TermKind::exp_decay:
      return term.amplitude * std::exp(-term.frequency * t);
    case TermKind::sin_state:
    case TermKind::inv_quad_state: {
      if (term.state_index < 0 || term.state_index >= x.size()) {
        throw Error(ErrorCode::invalid_model,
                    "state_index " + std::to_string(term.state_index) + " out of range");
      }
      const double s = x(term.state_index);
      return term.kind == TermKind::sin_state ? term.amplitude * std::sin(s)
                                              : term.amplitude / (s * s + 1.0);
    }
  }
  throw Error(ErrorCode::invalid_model, "unknown term kind");
}

Eigen::VectorXd eval_disturbance(const DisturbanceModel& model, double t,
                                 const Eigen::VectorXd& x) {
  Eigen::VectorXd value = Eigen::VectorXd::Zero(x.size());
  if (model.empty()) return value;
  if (static_cast<Eigen::Index>(model.components.size()) != x.size()) {
    throw Error(ErrorCode::invalid_model, "disturbance model does not match the state dimension");
  }
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    value(k) = component_sum(model.components[k], t, x);
  }
  return value;
}

Eigen::VectorXd eval_leader_input(const LeaderInput& input, double t,
                                  const Eigen::VectorXd& x_leader, int input_dim) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(input_dim);
  if (input.empty()) return u;
  if (static_cast<int>(input.components.size()) != input_dim) {
    throw Error(ErrorCode::invalid_model, "leader input does not match the input dimension");
  }
  for (int k = 0; k < input_dim; ++k) {
    u(k) = component_sum(input.components[k], t, x_leader);
  }
  return u;
}

double disturbance_amplitude_bound(const DisturbanceModel& model) {
  double sq = 0.0;
  for (const auto& terms : model.components) {
    const double b = component_bound(terms);
    sq += b * b;
  }
  return std::sqrt(sq);
}

Eigen::VectorXd disturbance_bound_vector(const Scenario& scenario) {
  const int agents = scenario.graph.node_count;
  const int n = scenario.dynamics.state_dim();
  const int p = scenario.dynamics.input_dim();
  Eigen::VectorXd upsilon = Eigen::VectorXd::Zero(agents);

  Eigen::VectorXd omega0_bound = Eigen::VectorXd::Zero(n);
  if (!scenario.disturbances.empty()) {
    if (static_cast<int>(scenario.disturbances.size()) != agents) {
      throw Error(ErrorCode::invalid_model, "need one disturbance model per agent");
    }
    for (int i = 1; i < agents; ++i) {
      upsilon(i) = disturbance_amplitude_bound(scenario.disturbances[i]);
    }
    const auto& leader_model = scenario.disturbances[0];
    for (std::size_t k = 0; k < leader_model.components.size(); ++k) {
      omega0_bound(static_cast<Eigen::Index>(k)) = component_bound(leader_model.components[k]);
    }
  }

  // ||B u0 + omega_0|| <= || |B| ub + wb || with per-component bounds.
  Eigen::VectorXd u0_bound = Eigen::VectorXd::Zero(p);
  for (std::size_t k = 0; k < scenario.leader_input.components.size(); ++k) {
    u0_bound(static_cast<Eigen::Index>(k)) = component_bound(scenario.leader_input.components[k]);
  }
  upsilon(0) = (scenario.dynamics.b.cwiseAbs() * u0_bound + omega0_bound).norm();
  return upsilon;
}

ClosedLoop::ClosedLoop(const Scenario& scenario, const GainSet& gains)
    : scenario_(scenario), gains_(gains) {
  if (!has_leader_spanning_tree(scenario_.graph)) {
    throw Error(ErrorCode::structural_assumption_failed,
                "graph has no leader-rooted spanning tree");
  }
  if (gains_.mode != scenario_.mode) {
    throw Error(ErrorCode::mode_mismatch, "gain mode does not match the scenario protocol");
  }
  const int n = scenario_.dynamics.state_dim();
  if (gains_.lyapunov.rows() != n) {
    throw Error(ErrorCode::dimension_error, "gain dimension does not match the dynamics");
  }
  follower_count_ = scenario_.graph.follower_count();
  joint_dim_ = (follower_count_ + 1) * n + follower_count_;

  if (static_cast<int>(scenario_.initial_weights.size()) != follower_count_) {
    throw Error(ErrorCode::invalid_argument, "need one initial weight per follower");
  }
  for (double w : scenario_.initial_weights) {
    if (scenario_.mode == GainMode::nominal && w < 0.0) {
      throw Error(ErrorCode::invalid_argument, "nominal mode requires c_i(0) >= 0");
    }
    if (scenario_.mode == GainMode::robust && w < 1.0) {
      throw Error(ErrorCode::invalid_argument, "robust mode requires d_i(0) >= 1");
    }
  }
  if (scenario_.mode == GainMode::robust) {
    if (static_cast<int>(scenario_.phi.size()) != follower_count_) {
      throw Error(ErrorCode::invalid_leakage, "need one phi per follower");
    }
    for (double phi : scenario_.phi) {
      if (phi <= 0.0) throw Error(ErrorCode::invalid_leakage, "phi must be positive");
    }
  }
  if (!scenario_.disturbances.empty() &&
      static_cast<int>(scenario_.disturbances.size()) != follower_count_ + 1) {
    throw Error(ErrorCode::invalid_model, "need one disturbance model per agent");
  }

  in_neighbors_.resize(follower_count_ + 1);
  for (int i = 0; i <= follower_count_; ++i) {
    in_neighbors_[i] = scenario_.graph.in_neighbors(i);
  }
}

Eigen::VectorXd ClosedLoop::initial_state() const {
  const int n = scenario_.dynamics.state_dim();
  const int agents = follower_count_ + 1;
  Eigen::VectorXd z(joint_dim_);

  const auto& spec = scenario_.initial_states;
  if (!spec.values.empty()) {
    if (static_cast<int>(spec.values.size()) != agents) {
      throw Error(ErrorCode::invalid_argument, "need one initial state per agent");
    }
    for (int i = 0; i < agents; ++i) {
      if (spec.values[i].size() != n) {
        throw Error(ErrorCode::dimension_error, "initial state dimension mismatch");
      }
      z.segment(i * n, n) = spec.values[i];
    }
  } else {
    std::uint64_t stream = spec.seed;
    for (int i = 0; i < agents; ++i) {
      for (int k = 0; k < n; ++k) {
        z(i * n + k) = spec.range * (2.0 * uniform_unit(stream) - 1.0);
      }
    }
  }
  for (int i = 0; i < follower_count_; ++i) {
    z(agents * n + i) = scenario_.initial_weights[i];
  }
  return z;
}

ControlResult ClosedLoop::follower_control(int follower, const Eigen::VectorXd& z) const {
  const int n = scenario_.dynamics.state_dim();
  const int agents = follower_count_ + 1;
  const Eigen::VectorXd x_i = z.segment(follower * n, n);

  std::vector<Eigen::VectorXd> neighbor_states;
  neighbor_states.reserve(in_neighbors_[follower].size());
  for (int j : in_neighbors_[follower]) {
    neighbor_states.push_back(z.segment(j * n, n));
  }
  const Eigen::VectorXd xi = relative_state(x_i, neighbor_states);
  const double weight = z(agents * n + follower - 1);
  if (scenario_.mode == GainMode::nominal) {
    return control_nominal(xi, weight, gains_);
  }
  return control_robust(xi, weight, gains_, scenario_.phi[follower - 1]);
}

Eigen::VectorXd ClosedLoop::derivative(double t, const Eigen::VectorXd& z) const {
  if (z.size() != joint_dim_) {
    throw Error(ErrorCode::dimension_error, "joint state has wrong dimension");
  }
  const int n = scenario_.dynamics.state_dim();
  const int agents = follower_count_ + 1;
  const Eigen::MatrixXd& a = scenario_.dynamics.a;
  const Eigen::MatrixXd& b = scenario_.dynamics.b;

  Eigen::VectorXd dz(joint_dim_);

  const Eigen::VectorXd x_leader = z.segment(0, n);
  const Eigen::VectorXd u0 =
      eval_leader_input(scenario_.leader_input, t, x_leader, scenario_.dynamics.input_dim());
  Eigen::VectorXd dx0 = a * x_leader + b * u0;
  if (!scenario_.disturbances.empty()) {
    dx0 += eval_disturbance(scenario_.disturbances[0], t, x_leader);
  }
  dz.segment(0, n) = dx0;

  for (int i = 1; i < agents; ++i) {
    const Eigen::VectorXd x_i = z.segment(i * n, n);
    const ControlResult ctrl = follower_control(i, z);
    Eigen::VectorXd dx = a * x_i + b * ctrl.u;
    if (!scenario_.disturbances.empty()) {
      dx += eval_disturbance(scenario_.disturbances[i], t, x_i);
    }
    dz.segment(i * n, n) = dx;
    dz(agents * n + i - 1) = ctrl.weight_dot;
  }
  return dz;
}

Eigen::VectorXd ClosedLoop::controls(const Eigen::VectorXd& z) const {
  const int p = scenario_.dynamics.input_dim();
  Eigen::VectorXd u(follower_count_ * p);
  for (int i = 1; i <= follower_count_; ++i) {
    u.segment((i - 1) * p, p) = follower_control(i, z).u;
  }
  return u;
}

Trajectory simulate(const Scenario& scenario, const GainSet& gains) {
  if (scenario.sim.dt <= 0.0 || scenario.sim.horizon <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "dt and horizon must be positive");
  }
  if (scenario.sim.record_stride < 1) {
    throw Error(ErrorCode::invalid_argument, "record_stride must be >= 1");
  }
  const ClosedLoop loop(scenario, gains);
  const int n = scenario.dynamics.state_dim();
  const int p = scenario.dynamics.input_dim();
  const int followers = scenario.follower_count();
  const int agents = followers + 1;
  const double dt = scenario.sim.dt;
  const long steps = std::max(1L, std::lround(scenario.sim.horizon / dt));

  Trajectory traj;
  traj.agent_count = agents;
  traj.state_dim = n;
  traj.input_dim = p;
  traj.mode = scenario.mode;
  traj.dt = dt;
  traj.record_stride = scenario.sim.record_stride;
  traj.scenario_hash = scenario.content_hash;
  const std::size_t keep = static_cast<std::size_t>(steps / scenario.sim.record_stride) + 2;
  traj.times.reserve(keep);
  traj.states.reserve(keep);
  traj.weights.reserve(keep);
  traj.controls.reserve(keep);

  Eigen::VectorXd z = loop.initial_state();

  const auto record = [&](long step, const Eigen::VectorXd& state) {
    traj.times.push_back(step * dt);
    traj.states.push_back(state.head(agents * n));
    traj.weights.push_back(state.tail(followers));
    traj.controls.push_back(loop.controls(state));
  };

  record(0, z);
  Eigen::VectorXd k1, k2, k3, k4;
  for (long step = 0; step < steps; ++step) {
    const double t = step * dt;
    k1 = loop.derivative(t, z);
    k2 = loop.derivative(t + 0.5 * dt, z + (0.5 * dt) * k1);
    k3 = loop.derivative(t + 0.5 * dt, z + (0.5 * dt) * k2);
    k4 = loop.derivative(t + dt, z + dt * k3);
    z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!z.allFinite() || z.norm() > kDivergenceNorm) {
      throw Error(ErrorCode::divergence_detected,
                  "state diverged at t=" + std::to_string((step + 1) * dt));
    }
    const long done = step + 1;
    if (done % scenario.sim.record_stride == 0 || done == steps) {
      record(done, z);
    }
  }
  return traj;
}

}  // namespace macs
