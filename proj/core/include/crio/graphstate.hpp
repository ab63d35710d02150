#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crio/qcore.hpp"

namespace crio {

/// Simple undirected graph on vertices 1..num_vertices.
class Graph {
 public:
  using Edge = std::pair<int, int>;

  /// Edges are stored with u < v in the given order. Throws std::invalid_argument
  /// on self-loops, duplicates, or out-of-range vertices.
  Graph(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const { return num_vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(int u, int v) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  int num_vertices_;
  std::vector<Edge> edges_;
};

/// "a1", "a2", ..., "a<n>".
std::vector<std::string> vertex_labels(int n, std::string_view prefix = "a");

/// prod_{e in E} CZ_e |+>^n. Labels default to vertex_labels(n).
QuantumState build_graph_state(const Graph& graph, std::vector<std::string> labels = {});

/// Parameters of the (2N+1)-vertex channel. Group k (3 <= k <= N+1) pairs A_k with
/// A_{k+N}; group 2 is always wired to the controller.
struct CrioTopology {
  int N = 1;
  std::set<int> controlled_groups;

  static CrioTopology full(int N);
  bool controls(int group) const { return group == 2 || controlled_groups.count(group) > 0; }
};

/// Edges {1,2},{1,N+2} and per group k: {2,k},{k,N+2} (when controlled) and {k,k+N}.
/// Throws std::invalid_argument for N < 1 or a group outside 3..N+1.
Graph crio_graph(const CrioTopology& topology);

/// f(x) for the fully controlled channel; bits are q_1..q_{2N+1}.
int crio_phase_function(int N, std::string_view bits);

/// (-1)^f(x) / (2^N sqrt 2).
double amplitude_oracle(int N, std::string_view bits);

/// (1/sqrt 2^N) sum_q |q_1..q_N, q_1..q_N> on qubits a1..a<2N>.
QuantumState phi_state(int N);

/// Text format: a "n=<num_vertices>" header, then one "u v" pair per line.
/// Blank lines and lines starting with '#' are ignored.
Graph parse_edge_list(std::string_view text);
std::string to_edge_list(const Graph& graph);

}  // namespace crio
