#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "macs/error.hpp"

namespace macs {

/// Leader-rooted communication topology. Node 0 is the leader; nodes
/// 1..N are followers. Edges are ordered (parent, child) pairs with 0/1
/// weights, and the leader never appears as a child so that the Laplacian
/// partitions with a zero leader row.
struct DirectedGraph {
  int node_count = 0;                          // N + 1 agents
  std::vector<std::pair<int, int>> edges;      // (parent, child)
  Eigen::MatrixXd adjacency;                   // adjacency(i, j) = 1 iff edge (j, i)

  int follower_count() const { return node_count - 1; }

  /// In-neighbors of node i (the nodes i receives state from), ascending.
  std::vector<int> in_neighbors(int i) const;
};

/// Laplacian L of the full graph together with the follower block L1 and
/// leader column L2 from the partition L = [[0, 0], [L2, L1]].
struct LaplacianPartition {
  Eigen::MatrixXd full_laplacian;  // (N+1) x (N+1)
  Eigen::MatrixXd l1;              // N x N follower block
  Eigen::MatrixXd l2;              // N x 1 leader column
};

DirectedGraph build_graph(int node_count, const std::vector<std::pair<int, int>>& edges);

LaplacianPartition laplacian(const DirectedGraph& g);

/// True iff every follower is reachable from node 0 along directed edges.
bool has_leader_spanning_tree(const DirectedGraph& g);

/// True iff all eigenvalues of l1 have real part above tolerance. Requires
/// nonpositive off-diagonal entries (Z-pattern).
bool is_nonsingular_m_matrix(const Eigen::MatrixXd& l1, double tolerance = 1e-9);

/// The 7-node leader-rooted topology used by the built-in scenarios:
/// chain 0->1->2->3->4->5->6 plus shortcuts 1->4 and 3->6.
DirectedGraph default_seven_node_graph();

}  // namespace macs
