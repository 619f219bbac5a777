#include "binex/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include "binex/hash.hpp"

namespace binex {

namespace {

constexpr std::size_t kMatrixLimit = 2048;

std::string edge_text(const EdgeRecord& e) {
  std::ostringstream os;
  os << "edge " << e.u << "-" << e.v;
  return os.str();
}

}  // namespace

UndefinedPort::UndefinedPort(Vertex v, Port p, std::size_t s)
    : std::out_of_range("undefined port " + std::to_string(p) + " at vertex " +
                        std::to_string(v) + " (step " + std::to_string(s) + ")"),
      vertex(v),
      port(p),
      step(s) {}

GraphFormatError::GraphFormatError(std::size_t l, const std::string& what)
    : std::runtime_error("line " + std::to_string(l) + ": " + what), line(l) {}

PortGraph::PortGraph(std::size_t n, const std::vector<EdgeRecord>& edges) {
  if (n == 0) throw InvalidGraph("graph has no vertices");
  std::vector<std::vector<std::optional<Link>>> slots(n);
  std::vector<std::vector<Vertex>> nbrs(n);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw InvalidGraph(edge_text(e) + ": vertex out of range");
    if (e.u == e.v) throw InvalidGraph(edge_text(e) + ": self-loop");
    auto place = [&](Vertex a, Port pa, Vertex b, Port pb) {
      if (pa > n) throw InvalidGraph(edge_text(e) + ": port " + std::to_string(pa) +
                                     " exceeds possible degree at " + std::to_string(a));
      if (slots[a].size() <= pa) slots[a].resize(pa + 1);
      if (slots[a][pa]) throw InvalidGraph(edge_text(e) + ": port " + std::to_string(pa) +
                                           " reused at vertex " + std::to_string(a));
      slots[a][pa] = Link{b, pb};
      nbrs[a].push_back(b);
    };
    place(e.u, e.pu, e.v, e.pv);
    place(e.v, e.pv, e.u, e.pu);
  }
  for (Vertex v = 0; v < n; ++v) {
    auto sorted = nbrs[v];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidGraph("parallel edges at vertex " + std::to_string(v));
  }
  adj_.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    for (Port p = 0; p < slots[v].size(); ++p) {
      if (!slots[v][p])
        throw InvalidGraph("ports not contiguous at vertex " + std::to_string(v) +
                           ": port " + std::to_string(p) + " missing");
      adj_[v].push_back(*slots[v][p]);
    }
  }
  edge_count_ = edges.size();
  if (n <= kMatrixLimit) {
    matrix_.assign(n * n, 0);
    for (Vertex v = 0; v < n; ++v)
      for (Port p = 0; p < adj_[v].size(); ++p) matrix_[v * n + adj_[v][p].to] = p + 1;
  }
  auto d = bfs_distances(0);
  for (Vertex v = 0; v < n; ++v)
    if (d[v] == std::numeric_limits<std::size_t>::max())
      throw InvalidGraph("graph is not connected: vertex " + std::to_string(v) +
                         " unreachable from 0");
}

bool PortGraph::adjacent(Vertex u, Vertex v) const { return port_to(u, v).has_value(); }

std::optional<Port> PortGraph::port_to(Vertex u, Vertex v) const {
  const std::size_t n = order();
  if (!matrix_.empty()) {
    Port p = matrix_[u * n + v];
    if (p == 0) return std::nullopt;
    return p - 1;
  }
  for (Port p = 0; p < adj_[u].size(); ++p)
    if (adj_[u][p].to == v) return p;
  return std::nullopt;
}

std::vector<EdgeRecord> PortGraph::edges() const {
  std::vector<EdgeRecord> out;
  for (Vertex u = 0; u < order(); ++u)
    for (Port p = 0; p < adj_[u].size(); ++p)
      if (u < adj_[u][p].to) out.push_back({u, adj_[u][p].to, p, adj_[u][p].back});
  std::sort(out.begin(), out.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  return out;
}

std::vector<std::size_t> PortGraph::bfs_distances(Vertex v) const {
  std::vector<std::size_t> d(order(), std::numeric_limits<std::size_t>::max());
  std::deque<Vertex> q{v};
  d[v] = 0;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (const auto& l : adj_[u])
      if (d[l.to] == std::numeric_limits<std::size_t>::max()) {
        d[l.to] = d[u] + 1;
        q.push_back(l.to);
      }
  }
  return d;
}

bool PortGraph::operator==(const PortGraph& o) const {
  if (order() != o.order()) return false;
  for (Vertex v = 0; v < order(); ++v) {
    if (adj_[v].size() != o.adj_[v].size()) return false;
    for (Port p = 0; p < adj_[v].size(); ++p)
      if (adj_[v][p].to != o.adj_[v][p].to || adj_[v][p].back != o.adj_[v][p].back) return false;
  }
  return true;
}

std::string BinocularLabel::encode() const {
  std::ostringstream os;
  os << degree << ";";
  for (std::size_t i = 0; i < back_ports.size(); ++i) os << (i ? "," : "") << back_ports[i];
  os << ";";
  for (std::size_t i = 0; i < neighbour_edges.size(); ++i) {
    const auto& e = neighbour_edges[i];
    os << (i ? "," : "") << "(" << e.i << " " << e.j << " " << e.at_i << " " << e.at_j << ")";
  }
  return os.str();
}

std::uint64_t BinocularLabel::hash() const {
  std::uint64_t h = mix64(degree);
  for (Port b : back_ports) h = hash_combine(h, b);
  h = hash_combine(h, 0xffffffffULL);
  for (const auto& e : neighbour_edges) {
    h = hash_combine(h, (std::uint64_t(e.i) << 32) | e.j);
    h = hash_combine(h, (std::uint64_t(e.at_i) << 32) | e.at_j);
  }
  return h;
}

BinocularLabel binocular_label(const PortGraph& g, Vertex v) {
  BinocularLabel l;
  l.degree = g.degree(v);
  for (Port i = 0; i < l.degree; ++i) l.back_ports.push_back(g.link(v, i).back);
  for (Port i = 0; i < l.degree; ++i)
    for (Port j = i + 1; j < l.degree; ++j) {
      Vertex wi = g.neighbour(v, i), wj = g.neighbour(v, j);
      if (auto pij = g.port_to(wi, wj)) l.neighbour_edges.push_back({i, j, *pij, *g.port_to(wj, wi)});
    }
  return l;
}

std::vector<BinocularLabel> all_labels(const PortGraph& g) {
  std::vector<BinocularLabel> out;
  out.reserve(g.order());
  for (Vertex v = 0; v < g.order(); ++v) out.push_back(binocular_label(g, v));
  return out;
}

Vertex dest(const PortGraph& g, Vertex v0, const std::vector<Port>& ports) {
  Vertex v = v0;
  for (std::size_t s = 0; s < ports.size(); ++s) {
    if (ports[s] >= g.degree(v)) throw UndefinedPort(v, ports[s], s);
    v = g.neighbour(v, ports[s]);
  }
  return v;
}

Ball ball(const PortGraph& g, Vertex v0, std::size_t r) {
  Ball b;
  auto d = g.bfs_distances(v0);
  std::vector<Vertex> order;
  std::deque<Vertex> q{v0};
  std::vector<char> seen(g.order(), 0);
  seen[v0] = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    order.push_back(u);
    for (const auto& l : g.links(u))
      if (!seen[l.to] && d[l.to] <= r) {
        seen[l.to] = 1;
        q.push_back(l.to);
      }
  }
  std::vector<Vertex> local(g.order(), 0);
  for (Vertex i = 0; i < order.size(); ++i) local[order[i]] = i;
  b.root = 0;
  b.host = order;
  for (const auto& e : g.edges())
    if (seen[e.u] && seen[e.v]) b.edges.push_back({local[e.u], local[e.v], e.pu, e.pv});
  return b;
}

std::vector<Port> port_labels(const PortGraph& g, const std::vector<Vertex>& walk) {
  std::vector<Port> out;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    auto p = g.port_to(walk[i], walk[i + 1]);
    if (!p) throw InvalidGraph("walk uses a non-edge " + std::to_string(walk[i]) + "-" +
                               std::to_string(walk[i + 1]));
    out.push_back(*p);
  }
  return out;
}

PortGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> n;
  std::vector<EdgeRecord> edges;
  std::vector<std::size_t> edge_line;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      if (n) throw GraphFormatError(lineno, "duplicate 'v' record");
      long long k;
      if (!(ls >> k) || k <= 0) throw GraphFormatError(lineno, "'v' needs a positive vertex count");
      n = static_cast<std::size_t>(k);
    } else if (tag == "e") {
      if (!n) throw GraphFormatError(lineno, "'v' record must come first");
      long long a[4];
      for (auto& x : a)
        if (!(ls >> x) || x < 0) throw GraphFormatError(lineno, "'e' needs four non-negative integers");
      edges.push_back({Vertex(a[0]), Vertex(a[1]), Port(a[2]), Port(a[3])});
      edge_line.push_back(lineno);
    } else {
      throw GraphFormatError(lineno, "unknown record '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) throw GraphFormatError(lineno, "trailing token '" + extra + "'");
  }
  if (!n) throw GraphFormatError(lineno, "missing 'v' record");
  // Replay edges one at a time so violations are pinned to their line.
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.u >= *n || e.v >= *n) throw GraphFormatError(edge_line[i], "vertex out of range");
    if (e.u == e.v) throw GraphFormatError(edge_line[i], "self-loop");
    for (std::size_t j = 0; j < i; ++j) {
      const auto& f = edges[j];
      if ((f.u == e.u && f.v == e.v) || (f.u == e.v && f.v == e.u))
        throw GraphFormatError(edge_line[i], "parallel edge");
      if ((f.u == e.u && f.pu == e.pu) || (f.v == e.u && f.pv == e.pu))
        throw GraphFormatError(edge_line[i], "port " + std::to_string(e.pu) + " reused at vertex " +
                                                 std::to_string(e.u));
      if ((f.u == e.v && f.pu == e.pv) || (f.v == e.v && f.pv == e.pv))
        throw GraphFormatError(edge_line[i], "port " + std::to_string(e.pv) + " reused at vertex " +
                                                 std::to_string(e.v));
    }
  }
  try {
    return PortGraph(*n, edges);
  } catch (const InvalidGraph& err) {
    throw GraphFormatError(lineno, err.what());
  }
}

PortGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const PortGraph& g) {
  out << "v " << g.order() << "\n";
  for (const auto& e : g.edges()) out << "e " << e.u << " " << e.v << " " << e.pu << " " << e.pv << "\n";
}

std::string graph_text(const PortGraph& g) {
  std::ostringstream os;
  write_graph(os, g);
  return os.str();
}

}  // namespace binex
