#include "binex/enumeration.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>

#include "binex/cover.hpp"

namespace binex {

namespace {

std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }
std::size_t pair_index(std::size_t i, std::size_t j) { return j * (j - 1) / 2 + i; }  // i < j

bool mask_has(std::uint64_t mask, std::size_t m, std::size_t t) { return (mask >> (m - 1 - t)) & 1; }

bool mask_connected(std::size_t n, std::uint64_t mask) {
  const std::size_t m = pair_count(n);
  std::vector<Vertex> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<Vertex(Vertex)> root = [&](Vertex v) { return parent[v] == v ? v : parent[v] = root(parent[v]); };
  std::size_t comps = n;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (mask_has(mask, m, pair_index(i, j))) {
        Vertex a = root(Vertex(i)), b = root(Vertex(j));
        if (a != b) {
          parent[a] = b;
          --comps;
        }
      }
  return comps == 1;
}

}  // namespace

GraphStream::GraphStream(std::size_t n_max) : n_max_(n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
}

GraphStream enumerate_port_graphs(std::size_t n_max) { return GraphStream(n_max); }

bool GraphStream::load_mask() {
  while (n_ <= n_max_) {
    const std::size_t m = pair_count(n_);
    if (m > 63) throw std::invalid_argument("graph stream supports at most 11 vertices");
    for (; mask_ < (std::uint64_t(1) << m); ++mask_) {
      if (!mask_connected(n_, mask_)) continue;
      perms_.assign(n_, {});
      for (std::size_t j = 1; j < n_; ++j)
        for (std::size_t i = 0; i < j; ++i)
          if (mask_has(mask_, m, pair_index(i, j))) {
            perms_[i].push_back(Vertex(j));
            perms_[j].push_back(Vertex(i));
          }
      for (auto& p : perms_) std::sort(p.begin(), p.end());
      return true;
    }
    ++n_;
    mask_ = 0;
  }
  return false;
}

bool GraphStream::advance_ports() {
  for (std::size_t v = n_; v-- > 0;)
    if (std::next_permutation(perms_[v].begin(), perms_[v].end())) return true;
  return false;
}

PortGraph GraphStream::build() const {
  std::vector<EdgeRecord> edges;
  for (Vertex u = 0; u < n_; ++u)
    for (Port p = 0; p < perms_[u].size(); ++p) {
      Vertex v = perms_[u][p];
      if (u < v) {
        auto it = std::find(perms_[v].begin(), perms_[v].end(), u);
        edges.push_back({u, v, p, Port(it - perms_[v].begin())});
      }
    }
  return PortGraph(n_, edges);
}

std::optional<PortGraph> GraphStream::next() {
  while (true) {
    bool have;
    if (!started_) {
      started_ = true;
      n_ = 1;
      mask_ = 0;
      have = load_mask();
    } else if (advance_ports()) {
      have = true;
    } else {
      ++mask_;
      have = load_mask();
    }
    if (!have) return std::nullopt;
    ++scanned_;
    PortGraph g = build();
    if (seen_.insert(canonical_code(g)).second) {
      ++emitted_;
      return g;
    }
  }
}

std::vector<std::uint32_t> stream_key(const PortGraph& g) {
  const std::size_t n = g.order();
  std::vector<std::uint32_t> key{std::uint32_t(n)};
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) key.push_back(g.adjacent(Vertex(i), Vertex(j)) ? 1 : 0);
  for (Vertex v = 0; v < n; ++v)
    for (const auto& l : g.links(v)) key.push_back(l.to);
  return key;
}

PortGraph relabel(const PortGraph& g, const std::vector<Vertex>& perm) {
  std::vector<EdgeRecord> edges;
  for (const auto& e : g.edges()) edges.push_back({perm[e.u], perm[e.v], e.pu, e.pv});
  return PortGraph(g.order(), edges);
}

PortGraph stream_representative(const PortGraph& g, std::vector<Vertex>* perm_out) {
  const std::size_t n = g.order();
  std::vector<std::uint32_t> best;
  std::vector<Vertex> best_perm;
  std::vector<Vertex> assign;  // new label -> old vertex
  std::vector<char> used(n, 0);
  std::function<void(bool)> dfs = [&](bool smaller) {
    const std::size_t l = assign.size();
    if (l == n) {
      std::vector<Vertex> perm(n);
      for (Vertex i = 0; i < n; ++i) perm[assign[i]] = i;
      auto key = stream_key(relabel(g, perm));
      if (best.empty() || key < best) {
        best = std::move(key);
        best_perm = std::move(perm);
      }
      return;
    }
    for (Vertex u = 0; u < n; ++u) {
      if (used[u]) continue;
      bool s = smaller || best.empty();
      bool worse = false;
      for (std::size_t i = 0; i < l && !s && !worse; ++i) {
        std::uint32_t bit = g.adjacent(assign[i], u) ? 1 : 0;
        std::uint32_t ref = best[1 + pair_index(i, l)];
        if (bit < ref) s = true;
        else if (bit > ref) worse = true;
      }
      if (worse) continue;
      used[u] = 1;
      assign.push_back(u);
      dfs(s);
      assign.pop_back();
      used[u] = 0;
    }
  };
  dfs(false);
  if (perm_out) *perm_out = best_perm;
  return relabel(g, best_perm);
}

namespace {

std::optional<Vertex> matching_vertex(const PortGraph& h, const ViewTree& view0) {
  auto& forest = *view0.forest;
  const LabelId want = forest.node(view0.root).label;
  auto labels = all_labels(h);
  bool any = false;
  for (const auto& l : labels) any = any || forest.intern_label(l) == want;
  if (!any) return std::nullopt;
  auto roots = all_views(h, view0.depth, forest, &labels);
  for (Vertex x = 0; x < h.order(); ++x)
    if (roots[x] == view0.root) return x;
  return std::nullopt;
}

}  // namespace

std::optional<Candidate> find_candidate_literal(const ViewTree& view0, std::size_t k) {
  if (k < 2) return std::nullopt;
  GraphStream s(k - 1);
  while (auto h = s.next())
    if (auto x = matching_vertex(*h, view0)) return Candidate{std::move(*h), *x};
  return std::nullopt;
}

std::vector<Candidate> graphs_with_view(const ViewTree& view0, std::size_t n_max) {
  std::vector<Candidate> out;
  if (n_max < 1) return out;
  auto& forest = *view0.forest;
  struct Slot {
    Vertex to;
    Port back;
    bool set = false;
  };
  std::vector<ViewNodeId> node{view0.root};
  std::vector<std::size_t> radius{view0.depth};
  std::vector<std::vector<Slot>> arcs;
  auto deg_of = [&](ViewNodeId id) { return forest.label(forest.node(id).label).degree; };
  arcs.push_back(std::vector<Slot>(deg_of(view0.root)));

  auto linked = [&](Vertex a, Vertex b) {
    for (const auto& s : arcs[a])
      if (s.set && s.to == b) return true;
    return false;
  };
  std::function<void(Vertex, Port)> rec = [&](Vertex x, Port p) {
    if (x == node.size()) {
      std::vector<EdgeRecord> edges;
      for (Vertex u = 0; u < node.size(); ++u)
        for (Port q = 0; q < arcs[u].size(); ++q)
          if (u < arcs[u][q].to) edges.push_back({u, arcs[u][q].to, q, arcs[u][q].back});
      PortGraph h(node.size(), edges);
      auto roots = all_views(h, view0.depth, forest);
      if (roots[0] == view0.root) out.push_back({std::move(h), 0});
      return;
    }
    if (p == arcs[x].size()) return rec(x + 1, 0);
    if (arcs[x][p].set) return rec(x, p + 1);
    if (radius[x] == 0) return;  // unconstrained port: outside the view
    const auto& nd = forest.node(node[x]);
    const ViewChild c = nd.children[p];
    const LabelId cl = forest.node(c.node).label;
    const std::size_t cr = radius[x] - 1;
    for (Vertex y = 0; y < node.size(); ++y) {
      if (y == x || forest.node(node[y]).label != cl || arcs[y][c.in].set || linked(x, y)) continue;
      const std::size_t t = std::min(radius[y], cr);
      if (forest.truncate(node[y], t) != forest.truncate(c.node, t)) continue;
      arcs[x][p] = {y, c.in, true};
      arcs[y][c.in] = {x, p, true};
      rec(x, p + 1);
      arcs[x][p].set = false;
      arcs[y][c.in].set = false;
    }
    if (node.size() < n_max) {
      const Vertex y = Vertex(node.size());
      node.push_back(c.node);
      radius.push_back(cr);
      arcs.push_back(std::vector<Slot>(deg_of(c.node)));
      arcs[x][p] = {y, c.in, true};
      arcs[y][c.in] = {x, p, true};
      rec(x, p + 1);
      arcs[x][p].set = false;
      node.pop_back();
      radius.pop_back();
      arcs.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

std::optional<Candidate> find_candidate_indexed(const ViewTree& view0, std::size_t k) {
  if (k < 2) return std::nullopt;
  auto sols = graphs_with_view(view0, k - 1);
  std::optional<PortGraph> best;
  std::vector<std::uint32_t> best_key;
  for (auto& s : sols) {
    PortGraph rep = stream_representative(s.graph);
    auto key = stream_key(rep);
    if (!best || key < best_key) {
      best = std::move(rep);
      best_key = std::move(key);
    }
  }
  if (!best) return std::nullopt;
  auto x = matching_vertex(*best, view0);
  if (!x) throw std::logic_error("representative lost the matching vertex");
  return Candidate{std::move(*best), *x};
}

std::optional<Candidate> find_candidate(const ViewTree& view0, std::size_t k, const StreamMode& mode) {
  if (view0.depth != 2 * k) throw DepthMismatch(view0.depth, 2 * k);
  if (mode.kind == StreamMode::Kind::hinted) {
    for (const auto& h : mode.hints) {
      if (h.order() >= k) continue;
      if (auto x = matching_vertex(h, view0)) return Candidate{h, *x};
    }
    if (!mode.then_exhaustive) return std::nullopt;
  }
  if (k < 2) return std::nullopt;
  if (k - 1 <= mode.literal_limit) return find_candidate_literal(view0, k);
  return find_candidate_indexed(view0, k);
}

std::vector<PortGraph> load_hints(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const auto dir = std::filesystem::path(path).parent_path();
  std::vector<PortGraph> out;
  std::string line;
  while (std::getline(in, line)) {
    auto a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    auto b = line.find_last_not_of(" \t\r");
    std::filesystem::path p = line.substr(a, b - a + 1);
    if (p.is_relative()) p = dir / p;
    out.push_back(load_graph(p.string()));
  }
  return out;
}

}  // namespace binex
