#include "cfdpf/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace cfdpf {

bool NetworkGraph::adjacent(int a, int b) const {
  const auto& nb = neighbours.at(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::size_t NetworkGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& nb : neighbours) total += nb.size();
  return total / 2;
}

NetworkGraph geometric_graph(std::vector<Point2> positions, double radius, double region_side) {
  NetworkGraph g;
  g.n_nodes = static_cast<int>(positions.size());
  g.positions = std::move(positions);
  g.connectivity_radius = radius;
  g.region_side = region_side;
  g.neighbours.assign(g.n_nodes, {});
  for (int a = 0; a < g.n_nodes; ++a) {
    for (int b = a + 1; b < g.n_nodes; ++b) {
      if ((g.positions[a] - g.positions[b]).norm() <= radius) {
        g.neighbours[a].push_back(b);
        g.neighbours[b].push_back(a);
      }
    }
  }
  for (auto& nb : g.neighbours) std::sort(nb.begin(), nb.end());
  return g;
}

NetworkGraph graph_from_edges(int n_nodes, const std::vector<std::pair<int, int>>& edges) {
  NetworkGraph g;
  g.n_nodes = n_nodes;
  g.neighbours.assign(n_nodes, {});
  g.positions.assign(n_nodes, Point2::Zero());
  for (auto [a, b] : edges) {
    if (a == b || a < 0 || b < 0 || a >= n_nodes || b >= n_nodes) {
      throw Error("graph", "invalid edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    }
    g.neighbours[a].push_back(b);
    g.neighbours[b].push_back(a);
  }
  for (auto& nb : g.neighbours) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return g;
}

bool is_connected(const NetworkGraph& graph) {
  if (graph.n_nodes <= 1) return true;
  std::vector<bool> seen(graph.n_nodes, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : graph.neighbours[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == graph.n_nodes;
}

double default_connectivity_radius(int n_nodes, double region_side) {
  return region_side * std::sqrt(2.0 * std::log(static_cast<double>(n_nodes)) / n_nodes);
}

NetworkGraph random_geometric_graph(int n_nodes, double radius, double region_side, Rng& rng,
                                    int max_attempts) {
  if (n_nodes < 2) throw Error("config", "random geometric graph needs at least 2 nodes");
  std::uniform_real_distribution<double> unif(0.0, region_side);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<Point2> pos(n_nodes);
    for (auto& p : pos) {
      const double x = unif(rng);
      p = Point2(x, unif(rng));
    }
    NetworkGraph g = geometric_graph(std::move(pos), radius, region_side);
    if (is_connected(g)) return g;
  }
  throw Error("graph_generation", "could not generate connected graph");
}

ConsensusMatrix make_consensus_matrix(const Matrix& weights) {
  ConsensusMatrix u;
  u.weights = weights;
  const int n = static_cast<int>(weights.rows());
  u.rows.assign(n, {});
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < n; ++j) {
      if (weights(l, j) != 0.0) u.rows[l].emplace_back(j, weights(l, j));
    }
  }
  Eigen::EigenSolver<Matrix> es(weights, false);
  Vector mags = es.eigenvalues().cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size(), std::greater<double>());
  u.eigenvalue_magnitudes = mags;
  u.convergence_time = convergence_time(u);
  return u;
}

ConsensusMatrix metropolis_weights(const NetworkGraph& graph) {
  const int n = graph.n_nodes;
  Matrix w = Matrix::Zero(n, n);
  for (int l = 0; l < n; ++l) {
    double off = 0.0;
    for (int j : graph.neighbours[l]) {
      w(l, j) = 1.0 / (1.0 + std::max(graph.degree(l), graph.degree(j)));
      off += w(l, j);
    }
    w(l, l) = 1.0 - off;
  }
  return make_consensus_matrix(w);
}

double convergence_time(const ConsensusMatrix& u) {
  const auto& mags = u.eigenvalue_magnitudes;
  if (mags.size() < 2) return 0.0;
  const double second = mags(1);  // mags(0) = 1 for a doubly stochastic U
  if (second <= 1e-14) return 0.0;
  if (second >= 1.0 - 1e-14) return std::numeric_limits<double>::infinity();
  return -1.0 / std::log(second);
}

double convergence_time(const Matrix& u) { return make_consensus_matrix(u).convergence_time; }

double max_disagreement(const std::vector<Matrix>& values) {
  if (values.empty()) return 0.0;
  Matrix mean = Matrix::Zero(values[0].rows(), values[0].cols());
  for (const auto& v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double worst = 0.0;
  for (const auto& v : values) worst = std::max(worst, (v - mean).norm());
  return worst;
}

ConsensusRun run_consensus(const ConsensusState& state, const ConsensusMatrix& u, int iterations) {
  if (iterations < 0) throw Error("domain", "consensus iterations must be non-negative");
  const int n = u.size();
  if (static_cast<int>(state.values.size()) != n) {
    throw Error("shape", "consensus state has " + std::to_string(state.values.size()) +
                             " nodes, matrix has " + std::to_string(n));
  }
  for (const auto& v : state.values) {
    if (v.rows() != state.values[0].rows() || v.cols() != state.values[0].cols()) {
      throw Error("shape", "consensus values must share one shape");
    }
  }
  ConsensusRun run;
  run.state = state;
  run.disagreement.reserve(iterations + 1);
  run.disagreement.push_back(max_disagreement(run.state.values));
  std::vector<Matrix> next(n);
  for (int t = 0; t < iterations; ++t) {
    for (int l = 0; l < n; ++l) {
      next[l].setZero(run.state.values[l].rows(), run.state.values[l].cols());
      for (auto [j, w] : u.rows[l]) next[l].noalias() += w * run.state.values[j];
    }
    std::swap(next, run.state.values);
    ++run.state.iteration;
    run.disagreement.push_back(max_disagreement(run.state.values));
  }
  return run;
}

nlohmann::json graph_to_json(const NetworkGraph& graph, const ConsensusMatrix* u) {
  nlohmann::json doc;
  doc["n_nodes"] = graph.n_nodes;
  doc["region_side"] = graph.region_side;
  doc["connectivity_radius"] = graph.connectivity_radius;
  auto& nodes = doc["nodes"] = nlohmann::json::array();
  for (int l = 0; l < graph.n_nodes; ++l) {
    nodes.push_back({{"id", l}, {"x", graph.positions[l].x()}, {"y", graph.positions[l].y()}});
  }
  auto& edges = doc["edges"] = nlohmann::json::array();
  for (int a = 0; a < graph.n_nodes; ++a) {
    for (int b : graph.neighbours[a]) {
      if (a < b) edges.push_back({a, b});
    }
  }
  if (u != nullptr) {
    auto& rows = doc["consensus_matrix"] = nlohmann::json::array();
    for (int l = 0; l < u->size(); ++l) {
      std::vector<double> row(u->size());
      for (int j = 0; j < u->size(); ++j) row[j] = u->weights(l, j);
      rows.push_back(row);
    }
    doc["convergence_time"] = std::isfinite(u->convergence_time)
                                  ? nlohmann::json(u->convergence_time)
                                  : nlohmann::json(nullptr);
  }
  return doc;
}

NetworkGraph graph_from_json(const nlohmann::json& doc) {
  const int n = doc.at("n_nodes").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : doc.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  NetworkGraph g = graph_from_edges(n, edges);
  g.region_side = doc.value("region_side", 1.0);
  g.connectivity_radius = doc.value("connectivity_radius", 0.0);
  if (doc.contains("nodes")) {
    for (const auto& node : doc.at("nodes")) {
      const int id = node.at("id").get<int>();
      g.positions.at(id) = Point2(node.at("x").get<double>(), node.at("y").get<double>());
    }
  }
  return g;
}

}  // namespace cfdpf
