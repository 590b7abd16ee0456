#pragma once

#include <random>
#include <utility>
#include <vector>

#include "macs/graph.hpp"
#include "macs/synthesis.hpp"

namespace macs::testing {

/// Random leader-rooted-or-not directed graph with up to max_followers
/// followers. Edge density varies so both connected and disconnected
/// topologies appear.
inline DirectedGraph random_graph(std::mt19937& rng, int max_followers = 8) {
  std::uniform_int_distribution<int> follower_dist(1, max_followers);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int followers = follower_dist(rng);
  const double density = 0.08 + 0.45 * unit(rng);
  std::vector<std::pair<int, int>> edges;
  for (int child = 1; child <= followers; ++child) {
    for (int parent = 0; parent <= followers; ++parent) {
      if (parent == child) continue;
      if (unit(rng) < density) edges.emplace_back(parent, child);
    }
  }
  return build_graph(followers + 1, edges);
}

/// Random graph that satisfies the leader-spanning-tree assumption: a
/// random tree rooted at the leader plus extra random edges.
inline DirectedGraph random_rooted_graph(std::mt19937& rng, int max_followers = 8) {
  std::uniform_int_distribution<int> follower_dist(1, max_followers);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int followers = follower_dist(rng);
  std::vector<std::pair<int, int>> edges;
  for (int child = 1; child <= followers; ++child) {
    std::uniform_int_distribution<int> parent_dist(0, child - 1);
    edges.emplace_back(parent_dist(rng), child);
  }
  for (int child = 1; child <= followers; ++child) {
    for (int parent = 0; parent <= followers; ++parent) {
      if (parent == child) continue;
      if (unit(rng) < 0.15) edges.emplace_back(parent, child);
    }
  }
  return build_graph(followers + 1, edges);
}

/// Random stabilizable pair (A, B) with n <= max_dim states.
inline AgentDynamics random_stabilizable(std::mt19937& rng, int max_dim = 4) {
  std::uniform_int_distribution<int> n_dist(1, max_dim);
  std::uniform_int_distribution<int> p_dist(1, 2);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  for (;;) {
    const int n = n_dist(rng);
    const int p = p_dist(rng);
    Eigen::MatrixXd a(n, n), b(n, p);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) a(r, c) = entry(rng);
      for (int c = 0; c < p; ++c) b(r, c) = entry(rng);
    }
    const AgentDynamics dynamics(a, b);
    if (check_stabilizable(dynamics)) return dynamics;
  }
}

}  // namespace macs::testing
