#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cfdpf/common.hpp"
#include "cfdpf/ssm.hpp"

namespace cfdpf {

/// Undirected sensor graph on a square region.
struct NetworkGraph {
  int n_nodes = 0;
  std::vector<std::vector<int>> neighbours;  // sorted, no self-loops
  std::vector<Point2> positions;
  double connectivity_radius = 0.0;
  double region_side = 1.0;

  bool adjacent(int a, int b) const;
  int degree(int node) const { return static_cast<int>(neighbours.at(node).size()); }
  std::size_t edge_count() const;
};

/// Builds a graph from explicit positions: edge iff distance <= radius.
NetworkGraph geometric_graph(std::vector<Point2> positions, double radius, double region_side);
/// Builds a graph from an explicit edge list.
NetworkGraph graph_from_edges(int n_nodes, const std::vector<std::pair<int, int>>& edges);

bool is_connected(const NetworkGraph& graph);

/// sqrt(2 log N / N) scaled to the region side.
double default_connectivity_radius(int n_nodes, double region_side);

/// Uniform positions in [0, side]^2, redrawn until the graph is connected.
NetworkGraph random_geometric_graph(int n_nodes, double radius, double region_side, Rng& rng,
                                    int max_attempts = 10000);

struct ConsensusMatrix {
  Matrix weights;                    // U, doubly stochastic
  Vector eigenvalue_magnitudes;      // |lambda_i| sorted descending
  double convergence_time = 0.0;     // N_c(U)
  // Sparse view used by the iteration: for node l, (j, U_lj) including j = l.
  std::vector<std::vector<std::pair<int, double>>> rows;

  int size() const { return static_cast<int>(weights.rows()); }
};

/// Wraps an arbitrary doubly stochastic matrix and fills the spectral metadata.
ConsensusMatrix make_consensus_matrix(const Matrix& weights);

/// Metropolis-Hastings weights U_lj = 1 / (1 + max(deg_l, deg_j)).
ConsensusMatrix metropolis_weights(const NetworkGraph& graph);

/// -1 / max_{i>=2} log|lambda_i(U)|; 0 when every non-unit eigenvalue is 0,
/// +inf when |lambda_2| = 1.
double convergence_time(const ConsensusMatrix& u);
double convergence_time(const Matrix& u);

/// Per-node consensus values of uniform shape (scalar = 1x1, vector = n x 1).
struct ConsensusState {
  std::vector<Matrix> values;
  int iteration = 0;
};

struct ConsensusRun {
  ConsensusState state;
  std::vector<double> disagreement;  // max_l ||X_l(t) - mean||_F, t = 0..iterations
};

/// Synchronous rounds X_l(t+1) = sum_j U_lj X_j(t), elementwise.
ConsensusRun run_consensus(const ConsensusState& state, const ConsensusMatrix& u, int iterations);

double max_disagreement(const std::vector<Matrix>& values);

nlohmann::json graph_to_json(const NetworkGraph& graph, const ConsensusMatrix* u = nullptr);
NetworkGraph graph_from_json(const nlohmann::json& doc);

}  // namespace cfdpf
