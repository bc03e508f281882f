#include "arock/io/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "arock/io/libsvm.hpp"

namespace arock {

void GraphSpec::validate(bool require_connected) const {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    if (i == j) throw std::invalid_argument("graph: self-loop at node " + std::to_string(i));
    if (i > j) throw std::invalid_argument("graph: edge " + std::to_string(e) + " not stored as i < j");
    if (j >= nodes) throw std::invalid_argument("graph: edge " + std::to_string(e) + " names a missing node");
    if (!seen.insert({i, j}).second)
      throw std::invalid_argument("graph: duplicate edge (" + std::to_string(i) + ", " +
                                  std::to_string(j) + ")");
  }
  if (!rates.empty()) {
    if (rates.size() != nodes) throw std::invalid_argument("graph: one rate per node required");
    for (double r : rates)
      if (!(r > 0.0)) throw std::invalid_argument("graph: activation rates must be positive");
  }
  if (require_connected && !connected()) throw std::invalid_argument("graph: not connected");
}

bool GraphSpec::connected() const {
  if (nodes == 0) return false;
  const auto inc = incident_edges();
  std::vector<char> seen(nodes, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t e : inc[u]) {
      const std::size_t v = edges[e].first == u ? edges[e].second : edges[e].first;
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == nodes;
}

std::vector<std::size_t> GraphSpec::degrees() const {
  std::vector<std::size_t> deg(nodes, 0);
  for (const auto& [i, j] : edges) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

std::vector<std::vector<std::size_t>> GraphSpec::incident_edges() const {
  std::vector<std::vector<std::size_t>> inc(nodes);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    inc[edges[e].first].push_back(e);
    inc[edges[e].second].push_back(e);
  }
  return inc;
}

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "path") return GraphKind::path;
  if (name == "star") return GraphKind::star;
  if (name == "ring") return GraphKind::ring;
  if (name == "erdos_renyi" || name == "er") return GraphKind::erdos_renyi;
  throw std::invalid_argument("unknown graph kind '" + name + "'");
}

GraphSpec gen_graph(GraphKind kind, std::size_t m, std::uint64_t seed, double edge_prob) {
  if (m < 2) throw std::invalid_argument("gen_graph: need at least 2 nodes");
  GraphSpec g;
  g.nodes = m;
  switch (kind) {
    case GraphKind::path:
      for (std::size_t i = 0; i + 1 < m; ++i) g.edges.emplace_back(i, i + 1);
      break;
    case GraphKind::star:
      for (std::size_t i = 1; i < m; ++i) g.edges.emplace_back(0, i);
      break;
    case GraphKind::ring:
      for (std::size_t i = 0; i + 1 < m; ++i) g.edges.emplace_back(i, i + 1);
      if (m > 2) g.edges.emplace_back(0, m - 1);
      break;
    case GraphKind::erdos_renyi: {
      if (!(edge_prob > 0.0 && edge_prob <= 1.0))
        throw std::invalid_argument("gen_graph: edge probability must lie in (0, 1]");
      std::mt19937_64 rng(seed);
      std::bernoulli_distribution coin(edge_prob);
      for (std::size_t attempt = 0; attempt < 10000; ++attempt) {
        g.edges.clear();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = i + 1; j < m; ++j)
            if (coin(rng)) g.edges.emplace_back(i, j);
        if (g.connected()) return g;
      }
      throw std::runtime_error("gen_graph: no connected Erdos-Renyi sample after 10000 draws");
    }
  }
  return g;
}

GraphSpec parse_graph(std::istream& in, const std::string& source_name) {
  GraphSpec g;
  std::size_t declared = 0, max_id = 0;
  bool any = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "nodes") {
      if (!(ls >> declared))
        throw DataError(source_name + ":" + std::to_string(lineno) + ": bad node count");
      continue;
    }
    std::size_t i = 0, j = 0;
    std::istringstream fs(first);
    std::string extra;
    if (!(fs >> i) || !(ls >> j) || (ls >> extra))
      throw DataError(source_name + ":" + std::to_string(lineno) + ": expected 'i j'");
    if (i == j)
      throw DataError(source_name + ":" + std::to_string(lineno) + ": self-loop");
    g.edges.emplace_back(std::min(i, j), std::max(i, j));
    max_id = std::max({max_id, i, j});
    any = true;
  }
  g.nodes = std::max(declared, any ? max_id + 1 : 0);
  try {
    g.validate(false);
  } catch (const std::invalid_argument& e) {
    throw DataError(source_name + ": " + e.what());
  }
  return g;
}

GraphSpec read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph '" + path + "'");
  return parse_graph(in, path);
}

void write_graph(std::ostream& out, const GraphSpec& g) {
  out << "nodes " << g.nodes << '\n';
  for (const auto& [i, j] : g.edges) out << i << ' ' << j << '\n';
}

SparseMatrixCSR metropolis_mixing_matrix(const GraphSpec& g) {
  const auto deg = g.degrees();
  std::vector<Triplet> t;
  std::vector<double> off_sum(g.nodes, 0.0);
  for (const auto& [i, j] : g.edges) {
    const double w = 1.0 / (1.0 + static_cast<double>(std::max(deg[i], deg[j])));
    t.push_back({i, j, w});
    t.push_back({j, i, w});
    off_sum[i] += w;
    off_sum[j] += w;
  }
  for (std::size_t i = 0; i < g.nodes; ++i) t.push_back({i, i, 1.0 - off_sum[i]});
  return SparseMatrixCSR::from_triplets(g.nodes, g.nodes, std::move(t));
}

}  // namespace arock
