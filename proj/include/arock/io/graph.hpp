#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "arock/io/sparse.hpp"

namespace arock {

/// Undirected simple graph on nodes 0..nodes-1. Edges are stored with
/// first < second, in insertion order; the edge index is its position.
struct GraphSpec {
  std::size_t nodes = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<double> rates;  ///< optional activation rates, one per node

  /// Throws on self-loops, duplicates, out-of-range ids, bad rates and, when
  /// requested, on a disconnected graph.
  void validate(bool require_connected = true) const;
  bool connected() const;
  std::vector<std::size_t> degrees() const;
  /// Edge indices incident to each node, ascending.
  std::vector<std::vector<std::size_t>> incident_edges() const;
};

enum class GraphKind { path, star, ring, erdos_renyi };

GraphKind parse_graph_kind(const std::string& name);

/// path: i -- i+1; star: hub 0 joined to all; ring: path plus (0, m-1);
/// erdos_renyi: each pair with probability `edge_prob`, redrawn until
/// connected. Deterministic in `seed`.
GraphSpec gen_graph(GraphKind kind, std::size_t m, std::uint64_t seed = 0,
                    double edge_prob = 0.2);

/// Edge-list text: one `i j` pair (0-based node ids) per line, `#` comments,
/// and an optional `nodes <m>` line declaring isolated trailing nodes.
GraphSpec parse_graph(std::istream& in, const std::string& source_name);
GraphSpec read_graph(const std::string& path);
void write_graph(std::ostream& out, const GraphSpec& g);

/// Metropolis-Hastings weights: w_ij = 1 / (1 + max(deg_i, deg_j)) on
/// edges, w_ii = 1 - sum_j w_ij. Symmetric and doubly stochastic.
SparseMatrixCSR metropolis_mixing_matrix(const GraphSpec& g);

}  // namespace arock
