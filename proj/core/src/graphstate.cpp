#include "crio/graphstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace crio {

Graph::Graph(int num_vertices, std::vector<Edge> edges) : num_vertices_(num_vertices) {
  if (num_vertices < 1) {
    throw std::invalid_argument("graph needs at least one vertex");
  }
  std::set<Edge> seen;
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 1 || v < 1 || u > num_vertices || v > num_vertices) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (u == v) {
      throw std::invalid_argument("self-loops are not allowed");
    }
    const Edge e{std::min(u, v), std::max(u, v)};
    if (!seen.insert(e).second) {
      throw std::invalid_argument("duplicate edge");
    }
    edges_.push_back(e);
  }
}

bool Graph::has_edge(int u, int v) const {
  const Edge e{std::min(u, v), std::max(u, v)};
  return std::find(edges_.begin(), edges_.end(), e) != edges_.end();
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.num_vertices_ != b.num_vertices_) return false;
  std::set<Graph::Edge> ea(a.edges_.begin(), a.edges_.end());
  std::set<Graph::Edge> eb(b.edges_.begin(), b.edges_.end());
  return ea == eb;
}

std::vector<std::string> vertex_labels(int n, std::string_view prefix) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    labels.push_back(std::string(prefix) + std::to_string(i));
  }
  return labels;
}

QuantumState build_graph_state(const Graph& graph, std::vector<std::string> labels) {
  if (labels.empty()) {
    labels = vertex_labels(graph.num_vertices());
  }
  if (static_cast<int>(labels.size()) != graph.num_vertices()) {
    throw std::invalid_argument("one label per vertex required");
  }
  QuantumState state = QuantumState::plus_state(labels);
  for (auto [u, v] : graph.edges()) {
    state.apply_cz(labels[static_cast<std::size_t>(u - 1)], labels[static_cast<std::size_t>(v - 1)]);
  }
  return state;
}

CrioTopology CrioTopology::full(int N) {
  CrioTopology t;
  t.N = N;
  for (int k = 3; k <= N + 1; ++k) t.controlled_groups.insert(k);
  return t;
}

Graph crio_graph(const CrioTopology& topology) {
  const int N = topology.N;
  if (N < 1) {
    throw std::invalid_argument("N must be at least 1");
  }
  for (int k : topology.controlled_groups) {
    if (k < 3 || k > N + 1) {
      throw std::invalid_argument("controlled group index must lie in 3..N+1");
    }
  }
  std::vector<Graph::Edge> edges{{1, 2}, {1, N + 2}};
  for (int k = 3; k <= N + 1; ++k) {
    if (topology.controlled_groups.count(k)) {
      edges.emplace_back(2, k);
      edges.emplace_back(k, N + 2);
    }
    edges.emplace_back(k, k + N);
  }
  return {2 * N + 1, std::move(edges)};
}

int crio_phase_function(int N, std::string_view bits) {
  if (N < 1) {
    throw std::invalid_argument("N must be at least 1");
  }
  if (bits.size() != static_cast<std::size_t>(2 * N + 1)) {
    throw std::invalid_argument("bitstring must have length 2N+1");
  }
  auto q = [&](int i) {
    const char c = bits[static_cast<std::size_t>(i - 1)];
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bitstring must contain only 0 and 1");
    }
    return c - '0';
  };
  int f = (q(1) & q(2)) ^ (q(1) & q(N + 2));
  for (int k = 3; k <= N + 1; ++k) {
    f ^= (q(2) & q(k)) ^ (q(k) & q(N + 2)) ^ (q(k) & q(k + N));
  }
  return f;
}

double amplitude_oracle(int N, std::string_view bits) {
  const int f = crio_phase_function(N, bits);
  const double magnitude = 1.0 / (std::pow(2.0, N) * std::numbers::sqrt2);
  return f ? -magnitude : magnitude;
}

QuantumState phi_state(int N) {
  if (N < 1) {
    throw std::invalid_argument("N must be at least 1");
  }
  const auto half = Eigen::Index{1} << N;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(half * half);
  const double a = 1.0 / std::sqrt(static_cast<double>(half));
  for (Eigen::Index q = 0; q < half; ++q) {
    amps(q * half + q) = a;
  }
  return {vertex_labels(2 * N), std::move(amps)};
}

Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int n = -1;
  std::vector<Graph::Edge> edges;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    line = line.substr(first);
    if (n < 0) {
      if (line.rfind("n=", 0) != 0) {
        throw std::invalid_argument("edge list must start with an 'n=<vertices>' header");
      }
      std::istringstream hdr(line.substr(2));
      if (!(hdr >> n) || n < 1) {
        throw std::invalid_argument("malformed vertex count in header");
      }
      continue;
    }
    std::istringstream row(line);
    int u = 0;
    int v = 0;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra)) {
      throw std::invalid_argument("malformed edge on line " + std::to_string(line_no));
    }
    edges.emplace_back(u, v);
  }
  if (n < 0) {
    throw std::invalid_argument("edge list is missing the 'n=' header");
  }
  return {n, std::move(edges)};
}

std::string to_edge_list(const Graph& graph) {
  std::ostringstream out;
  out << "n=" << graph.num_vertices() << '\n';
  for (auto [u, v] : graph.edges()) {
    out << u << ' ' << v << '\n';
  }
  return out.str();
}

}  // namespace crio
