#include <doctest.h>

#include <random>

#include "macs/metrics.hpp"
#include "support/checks.hpp"

using namespace macs;
using macs::testing::throws_code;

namespace {

Trajectory make_trajectory(int followers, int n, const std::vector<Eigen::VectorXd>& states,
                           const std::vector<Eigen::VectorXd>& weights, double dt = 0.1) {
  Trajectory traj;
  traj.agent_count = followers + 1;
  traj.state_dim = n;
  traj.input_dim = 1;
  traj.dt = dt;
  traj.states = states;
  traj.weights = weights;
  for (std::size_t k = 0; k < states.size(); ++k) {
    traj.times.push_back(dt * static_cast<double>(k));
    traj.controls.push_back(Eigen::VectorXd::Zero(followers));
  }
  return traj;
}

// Dense (L1 (x) I_n) oracle for the blockwise evaluation.
Eigen::VectorXd kron_xi(const Eigen::MatrixXd& l1, const Eigen::VectorXd& state, int n) {
  const int followers = static_cast<int>(l1.rows());
  Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(followers * n, followers * n);
  for (int i = 0; i < followers; ++i) {
    for (int j = 0; j < followers; ++j) {
      kron.block(i * n, j * n, n, n) = l1(i, j) * Eigen::MatrixXd::Identity(n, n);
    }
  }
  const Eigen::VectorXd x0 = state.segment(0, n);
  Eigen::VectorXd shifted(followers * n);
  for (int j = 0; j < followers; ++j) {
    shifted.segment(j * n, n) = state.segment((j + 1) * n, n) - x0;
  }
  return kron * shifted;
}

}  // namespace

TEST_CASE("consensus error vanishes at agreement") {
  const LaplacianPartition part = laplacian(build_graph(3, {{0, 1}, {1, 2}}));
  Eigen::VectorXd state(6);
  state << 1, 2, 1, 2, 1, 2;  // every agent at [1, 2]
  const Trajectory traj = make_trajectory(2, 2, {state, state},
                                          {Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2)});
  for (const auto& xi : consensus_error(traj, part)) CHECK(xi.norm() == 0.0);
}

TEST_CASE("single follower error is the plain difference") {
  const LaplacianPartition part = laplacian(build_graph(2, {{0, 1}}));
  Eigen::VectorXd state(2);
  state << 0.25, 0.75;
  const Trajectory traj = make_trajectory(1, 1, {state, state},
                                          {Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)});
  const auto xi = consensus_error(traj, part);
  CHECK(xi[0](0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("blockwise evaluation equals the Kronecker oracle") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  std::uniform_int_distribution<int> followers_dist(1, 4);
  std::uniform_int_distribution<int> dim_dist(1, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const int followers = followers_dist(rng);
    const int n = dim_dist(rng);
    // Random rooted chain with extra edges keeps L1 interesting.
    std::vector<std::pair<int, int>> edges;
    for (int child = 1; child <= followers; ++child) {
      std::uniform_int_distribution<int> parent(0, child - 1);
      edges.emplace_back(parent(rng), child);
      if (child >= 2 && entry(rng) > 0.0) edges.emplace_back(child - 1, child);
    }
    const LaplacianPartition part = laplacian(build_graph(followers + 1, edges));

    Eigen::VectorXd state((followers + 1) * n);
    for (Eigen::Index k = 0; k < state.size(); ++k) state(k) = entry(rng);
    const Trajectory traj = make_trajectory(
        followers, n, {state, state},
        {Eigen::VectorXd::Ones(followers), Eigen::VectorXd::Ones(followers)});
    const auto xi = consensus_error(traj, part);
    CHECK((xi[0] - kron_xi(part.l1, state, n)).norm() <= 1e-12 * (1.0 + xi[0].norm()));
  }
}

TEST_CASE("any follower deviation shows up in the error") {
  // L1 is nonsingular under the spanning-tree assumption, so xi = 0 only
  // at exact agreement.
  const LaplacianPartition part = laplacian(default_seven_node_graph());
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd state = Eigen::VectorXd::Constant(14, 0.5);
    std::uniform_int_distribution<int> follower(1, 6);
    state(2 * follower(rng)) += 0.1 + std::abs(entry(rng));
    const Trajectory traj = make_trajectory(
        6, 2, {state, state}, {Eigen::VectorXd::Ones(6), Eigen::VectorXd::Ones(6)});
    CHECK(consensus_error(traj, part)[0].norm() > 0.0);
  }
}

TEST_CASE("consensus error ignores common translations") {
  const LaplacianPartition part = laplacian(build_graph(4, {{0, 1}, {1, 2}, {0, 3}}));
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  Eigen::VectorXd state(8), shift(2);
  for (Eigen::Index k = 0; k < state.size(); ++k) state(k) = entry(rng);
  shift << 10.0, -3.0;
  Eigen::VectorXd translated = state;
  for (int agent = 0; agent < 4; ++agent) translated.segment(2 * agent, 2) += shift;

  const auto make = [&](const Eigen::VectorXd& s) {
    return make_trajectory(3, 2, {s, s}, {Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(3)});
  };
  const auto xi_base = consensus_error(make(state), part);
  const auto xi_shift = consensus_error(make(translated), part);
  CHECK((xi_base[0] - xi_shift[0]).norm() <= 1e-12 * (1.0 + xi_base[0].norm()));
}

TEST_CASE("drift detection on synthetic series") {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> weights;
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.1 * k;
    times.push_back(t);
    Eigen::VectorXd w(2);
    w << 2.5, 0.01 * t;  // constant and a perfect line
    weights.push_back(w);
  }
  const auto results = detect_drift(times, weights, 1e-3);
  CHECK(results[0].slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(results[0].drifting);
  CHECK(results[1].slope == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(results[1].drifting);
}

TEST_CASE("drift detection needs enough samples") {
  const std::vector<double> times{0.0};
  const std::vector<Eigen::VectorXd> weights{Eigen::VectorXd::Ones(1)};
  CHECK(throws_code(ErrorCode::insufficient_data, [&] { detect_drift(times, weights); }));
}

TEST_CASE("summarize a zero-error trajectory") {
  const LaplacianPartition part = laplacian(build_graph(2, {{0, 1}}));
  std::vector<Eigen::VectorXd> states, weights;
  Eigen::VectorXd state(2);
  state << 0.3, 0.3;
  for (int k = 0; k < 11; ++k) {
    states.push_back(state);
    weights.push_back(Eigen::VectorXd::Ones(1));
  }
  const Trajectory traj = make_trajectory(1, 1, states, weights);
  const ConsensusReport report = summarize(traj, part, 1e-3, 1e-3);
  CHECK(report.final_xi_norm == 0.0);
  REQUIRE(report.convergence_time.has_value());
  CHECK(*report.convergence_time == 0.0);
  CHECK(report.empirical_tail_bound == 0.0);
  CHECK_FALSE(report.drifting[0]);
}

TEST_CASE("summarize finds the convergence time of a decaying error") {
  const LaplacianPartition part = laplacian(build_graph(2, {{0, 1}}));
  std::vector<Eigen::VectorXd> states, weights;
  for (int k = 0; k <= 100; ++k) {
    Eigen::VectorXd state(2);
    state << 0.0, std::exp(-0.1 * k);  // xi = x1 - x0 decays
    states.push_back(state);
    weights.push_back(Eigen::VectorXd::Ones(1));
  }
  const Trajectory traj = make_trajectory(1, 1, states, weights);
  const ConsensusReport report = summarize(traj, part, 1e-3, 1e-3);
  REQUIRE(report.convergence_time.has_value());
  // exp(-0.1 k) < 1e-3 from k = 70 onward (t = 7.0).
  CHECK(*report.convergence_time == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(report.final_xi_norm == doctest::Approx(std::exp(-10.0)).epsilon(1e-12));

  // A trajectory that never settles reports no convergence time.
  states.back()(1) = 1.0;
  const Trajectory noisy = make_trajectory(1, 1, states, weights);
  CHECK_FALSE(summarize(noisy, part, 1e-3, 1e-3).convergence_time.has_value());
}
