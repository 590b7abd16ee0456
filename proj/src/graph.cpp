#include "macs/graph.hpp"

#include <queue>
#include <string>

namespace macs {

std::vector<int> DirectedGraph::in_neighbors(int i) const {
  std::vector<int> result;
  for (int j = 0; j < node_count; ++j) {
    if (adjacency(i, j) != 0.0) result.push_back(j);
  }
  return result;
}

DirectedGraph build_graph(int node_count, const std::vector<std::pair<int, int>>& edges) {
  if (node_count < 2) {
    throw Error(ErrorCode::invalid_node, "node_count must be >= 2, got " + std::to_string(node_count));
  }
  DirectedGraph g;
  g.node_count = node_count;
  g.adjacency = Eigen::MatrixXd::Zero(node_count, node_count);
  for (const auto& [parent, child] : edges) {
    if (parent < 0 || parent >= node_count || child < 0 || child >= node_count) {
      throw Error(ErrorCode::invalid_node,
                  "edge (" + std::to_string(parent) + ", " + std::to_string(child) + ") out of range");
    }
    if (parent == child) {
      throw Error(ErrorCode::invalid_edge, "self-loop at node " + std::to_string(parent));
    }
    if (child == 0) {
      throw Error(ErrorCode::invalid_edge,
                  "node 0 is the leader and cannot receive edges (edge " + std::to_string(parent) + " -> 0)");
    }
    g.adjacency(child, parent) = 1.0;
  }
  // Deduplicated edge list in adjacency order.
  for (int child = 0; child < node_count; ++child) {
    for (int parent = 0; parent < node_count; ++parent) {
      if (g.adjacency(child, parent) != 0.0) g.edges.emplace_back(parent, child);
    }
  }
  return g;
}

LaplacianPartition laplacian(const DirectedGraph& g) {
  const int m = g.node_count;
  LaplacianPartition part;
  part.full_laplacian = -g.adjacency;
  for (int i = 0; i < m; ++i) {
    part.full_laplacian(i, i) = g.adjacency.row(i).sum();
  }
  part.l1 = part.full_laplacian.bottomRightCorner(m - 1, m - 1);
  part.l2 = part.full_laplacian.block(1, 0, m - 1, 1);
  return part;
}

bool has_leader_spanning_tree(const DirectedGraph& g) {
  std::vector<bool> seen(g.node_count, false);
  std::queue<int> frontier;
  seen[0] = true;
  frontier.push(0);
  while (!frontier.empty()) {
    const int parent = frontier.front();
    frontier.pop();
    for (int child = 0; child < g.node_count; ++child) {
      if (!seen[child] && g.adjacency(child, parent) != 0.0) {
        seen[child] = true;
        frontier.push(child);
      }
    }
  }
  for (int i = 0; i < g.node_count; ++i) {
    if (!seen[i]) return false;
  }
  return true;
}

bool is_nonsingular_m_matrix(const Eigen::MatrixXd& l1, double tolerance) {
  if (l1.rows() != l1.cols() || l1.rows() < 1) {
    throw Error(ErrorCode::dimension_error, "l1 must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < l1.rows(); ++i) {
    for (Eigen::Index j = 0; j < l1.cols(); ++j) {
      if (i != j && l1(i, j) > 0.0) {
        throw Error(ErrorCode::not_z_pattern,
                    "positive off-diagonal entry at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(l1, /*computeEigenvectors=*/false);
  return eig.eigenvalues().real().minCoeff() > tolerance;
}

DirectedGraph default_seven_node_graph() {
  return build_graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {1, 4}, {3, 6}});
}

}  // namespace macs
