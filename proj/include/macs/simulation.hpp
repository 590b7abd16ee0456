#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "macs/graph.hpp"
#include "macs/protocol.hpp"
#include "macs/synthesis.hpp"

namespace macs {

/// Disturbance / input signal primitives. `sin` and `cos` are
/// amplitude * f(frequency * t + phase); `exp_decay` is
/// amplitude * exp(-rate * t); the state-dependent kinds read one
/// component of the owning agent's state.
enum class TermKind { sine, cosine, exp_decay, sin_state, inv_quad_state };

struct DisturbanceTerm {
  TermKind kind = TermKind::sine;
  double amplitude = 0.0;
  double frequency = 0.0;  // angular frequency for sine/cosine, decay rate for exp_decay
  double phase = 0.0;
  int state_index = 0;     // sin_state / inv_quad_state only
};

/// One signal model per state component; an empty component list means the
/// component is undisturbed, an empty model means the zero signal.
struct DisturbanceModel {
  std::vector<std::vector<DisturbanceTerm>> components;

  bool empty() const { return components.empty(); }
};

/// Leader control input u0, built from the same primitives (one term list
/// per input component). Zero by default.
struct LeaderInput {
  std::vector<std::vector<DisturbanceTerm>> components;

  bool empty() const { return components.empty(); }
};

struct SimSettings {
  double dt = 1e-3;
  double horizon = 20.0;
  int record_stride = 10;
};

/// Explicit per-agent initial states, or deterministic sampling from a
/// seed: components are drawn uniformly from [-range, range] agent by
/// agent (leader first) with a splitmix64 stream.
struct InitialStateSpec {
  std::uint64_t seed = 7;
  double range = 1.0;
  std::vector<Eigen::VectorXd> values;  // N+1 entries when explicit
};

struct MetricsSettings {
  double convergence_threshold = 1e-3;
  double drift_threshold = 1e-3;
};

/// Everything needed to run one closed-loop experiment.
struct Scenario {
  std::string name = "scenario";
  std::string description;
  DirectedGraph graph;
  AgentDynamics dynamics;
  GainMode mode = GainMode::nominal;
  std::vector<double> initial_weights;         // length N: c_i(0) or d_i(0)
  std::vector<double> phi;                     // length N, robust mode only
  double epsilon = 0.0;                        // robust mode only, > 1
  std::vector<DisturbanceModel> disturbances;  // N+1 entries (leader first) or empty
  LeaderInput leader_input;
  SimSettings sim;
  InitialStateSpec initial_states;
  MetricsSettings metrics;
  std::uint64_t content_hash = 0;              // set when loaded from JSON

  int follower_count() const { return graph.follower_count(); }
};

/// Recorded closed-loop run. States stack all agents leader-first; the
/// joint integration state appends the adaptive weights.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;    // (N+1)*n per entry
  std::vector<Eigen::VectorXd> weights;   // N per entry
  std::vector<Eigen::VectorXd> controls;  // N*p per entry
  int agent_count = 0;
  int state_dim = 0;
  int input_dim = 0;
  GainMode mode = GainMode::nominal;
  double dt = 0.0;
  int record_stride = 1;
  std::uint64_t scenario_hash = 0;

  std::size_t size() const { return times.size(); }
};

double eval_term(const DisturbanceTerm& term, double t, const Eigen::VectorXd& x);

/// Sum of the model's primitives, one value per state component.
Eigen::VectorXd eval_disturbance(const DisturbanceModel& model, double t,
                                 const Eigen::VectorXd& x);

Eigen::VectorXd eval_leader_input(const LeaderInput& input, double t,
                                  const Eigen::VectorXd& x_leader, int input_dim);

/// Conservative amplitude bound: per component the sum of |amplitude|,
/// then the 2-norm across components. Zero for an empty model.
double disturbance_amplitude_bound(const DisturbanceModel& model);

/// upsilon vector [v0, v1, ..., vN]: v0 bounds ||B u0 + omega_0||, vi
/// bounds ||omega_i||.
Eigen::VectorXd disturbance_bound_vector(const Scenario& scenario);

/// Precompiled closed loop: dynamics, in-neighbor lists, gains, and the
/// joint-state layout [x_0; x_1..x_N; w_1..w_N].
class ClosedLoop {
 public:
  ClosedLoop(const Scenario& scenario, const GainSet& gains);

  int joint_dim() const { return joint_dim_; }

  Eigen::VectorXd initial_state() const;

  /// Time derivative of the joint state under the scenario's protocol.
  Eigen::VectorXd derivative(double t, const Eigen::VectorXd& z) const;

  /// Stacked follower controls [u_1; ...; u_N] at the given joint state.
  Eigen::VectorXd controls(const Eigen::VectorXd& z) const;

  const Scenario& scenario() const { return scenario_; }
  const GainSet& gains() const { return gains_; }

 private:
  Scenario scenario_;
  GainSet gains_;
  std::vector<std::vector<int>> in_neighbors_;
  int follower_count_ = 0;
  int joint_dim_ = 0;

  ControlResult follower_control(int follower, const Eigen::VectorXd& z) const;
};

/// Fixed-step RK4 over [0, horizon] with snapshots every record_stride
/// steps (plus the final step). Bit-deterministic for identical scenarios.
Trajectory simulate(const Scenario& scenario, const GainSet& gains);

}  // namespace macs
