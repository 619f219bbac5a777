#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace binex {

using Vertex = std::uint32_t;
using Port = std::uint32_t;

struct InvalidGraph : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UndefinedPort : std::out_of_range {
  UndefinedPort(Vertex v, Port p, std::size_t step);
  Vertex vertex;
  Port port;
  std::size_t step;
};

struct GraphFormatError : std::runtime_error {
  GraphFormatError(std::size_t line, const std::string& what);
  std::size_t line;
};

struct Link {
  Vertex to;
  Port back;  // port at `to` leading back
};

struct EdgeRecord {
  Vertex u, v;
  Port pu, pv;
};

// Simple connected graph with ports 0..deg-1 at every vertex. Immutable.
class PortGraph {
 public:
  PortGraph() = default;
  PortGraph(std::size_t n, const std::vector<EdgeRecord>& edges);

  std::size_t order() const { return adj_.size(); }
  std::size_t size() const { return edge_count_; }
  Port degree(Vertex v) const { return static_cast<Port>(adj_[v].size()); }
  const Link& link(Vertex v, Port p) const { return adj_[v][p]; }
  Vertex neighbour(Vertex v, Port p) const { return adj_[v][p].to; }
  const std::vector<Link>& links(Vertex v) const { return adj_[v]; }
  bool adjacent(Vertex u, Vertex v) const;
  std::optional<Port> port_to(Vertex u, Vertex v) const;

  std::vector<EdgeRecord> edges() const;  // u < v, sorted
  std::vector<std::size_t> bfs_distances(Vertex v) const;

  bool operator==(const PortGraph& o) const;

 private:
  std::vector<std::vector<Link>> adj_;
  std::vector<Port> matrix_;  // n*n, port+1 or 0; empty for large graphs
  std::size_t edge_count_ = 0;
};

struct NeighbourEdge {
  Port i, j;          // ports at v, i < j
  Port at_i, at_j;    // port at w_i toward w_j, and at w_j toward w_i
  auto operator<=>(const NeighbourEdge&) const = default;
};

struct BinocularLabel {
  Port degree = 0;
  std::vector<Port> back_ports;
  std::vector<NeighbourEdge> neighbour_edges;  // sorted

  auto operator<=>(const BinocularLabel&) const = default;
  std::string encode() const;
  std::uint64_t hash() const;
};

BinocularLabel binocular_label(const PortGraph& g, Vertex v);
std::vector<BinocularLabel> all_labels(const PortGraph& g);

Vertex dest(const PortGraph& g, Vertex v0, const std::vector<Port>& ports);

// Induced subgraph on the radius-r ball. Ports are inherited from the host,
// so they need not be contiguous; hence not a PortGraph.
struct Ball {
  Vertex root;  // local index of v0
  std::vector<Vertex> host;  // local -> host vertex, BFS order
  std::vector<EdgeRecord> edges;  // local indices, host ports
};

Ball ball(const PortGraph& g, Vertex v0, std::size_t r);

// Port sequence of a walk given as vertices.
std::vector<Port> port_labels(const PortGraph& g, const std::vector<Vertex>& walk);

PortGraph read_graph(std::istream& in);
PortGraph load_graph(const std::string& path);
void write_graph(std::ostream& out, const PortGraph& g);
std::string graph_text(const PortGraph& g);

}  // namespace binex
