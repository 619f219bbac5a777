#include "binex/complex.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "binex/hash.hpp"

namespace binex {

std::size_t CliqueComplex::SimplexHash::operator()(const Simplex& s) const {
  std::uint64_t h = s.size();
  for (auto v : s) h = hash_combine(h, v);
  return h;
}

CliqueComplex::CliqueComplex(const PortGraph& g, std::size_t budget) : g_(&g) {
  const std::size_t n = g.order();
  std::vector<std::vector<Vertex>> up(n);  // neighbours with larger index
  for (Vertex v = 0; v < n; ++v) {
    for (const auto& l : g.links(v))
      if (l.to > v) up[v].push_back(l.to);
    std::sort(up[v].begin(), up[v].end());
  }
  std::vector<Simplex> all;
  Simplex cur;
  std::function<void(const std::vector<Vertex>&)> grow = [&](const std::vector<Vertex>& cand) {
    all.push_back(cur);
    if (all.size() > budget)
      throw BudgetExceeded("clique complex exceeds " + std::to_string(budget) + " simplices");
    for (std::size_t i = 0; i < cand.size(); ++i) {
      Vertex w = cand[i];
      std::vector<Vertex> next;
      std::set_intersection(cand.begin() + i + 1, cand.end(), up[w].begin(), up[w].end(),
                            std::back_inserter(next));
      cur.push_back(w);
      grow(next);
      cur.pop_back();
    }
  };
  for (Vertex v = 0; v < n; ++v) {
    cur = {v};
    grow(up[v]);
  }
  std::sort(all.begin(), all.end(), [](const Simplex& a, const Simplex& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  simplices_ = std::move(all);
  for (std::size_t i = 0; i < simplices_.size(); ++i) {
    const auto d = simplices_[i].size() - 1;
    if (by_dim_.size() <= d) by_dim_.resize(d + 1, 0);
    ++by_dim_[d];
    index_.emplace(simplices_[i], i);
  }
  stars_.resize(n);
  for (std::size_t i = 0; i < simplices_.size(); ++i) {
    const auto& s = simplices_[i];
    for (const auto& l : g.links(s[0])) {
      bool all_adj = true;
      for (std::size_t j = 1; j < s.size() && all_adj; ++j)
        all_adj = l.to == s[j] || g.adjacent(l.to, s[j]);
      if (all_adj && !std::binary_search(s.begin(), s.end(), l.to)) stars_[l.to].push_back(i);
    }
    for (auto v : s) stars_[v].push_back(i);
  }
  for (auto& st : stars_) std::sort(st.begin(), st.end());
  labels_ = all_labels(g);
}

std::size_t CliqueComplex::count(std::size_t dim) const {
  return dim < by_dim_.size() ? by_dim_[dim] : 0;
}

std::optional<std::size_t> CliqueComplex::index(const Simplex& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Vertex> CliqueComplex::triangles_on(Vertex u, Vertex v) const {
  std::vector<Vertex> out;
  for (const auto& l : g_->links(u))
    if (l.to != v && g_->adjacent(l.to, v)) out.push_back(l.to);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool total(const VertexMap& f, std::size_t n_src, std::size_t n_dst) {
  if (f.size() != n_src) return false;
  return std::all_of(f.begin(), f.end(), [&](Vertex v) { return v < n_dst; });
}

Simplex image(const VertexMap& f, const Simplex& s) {
  Simplex out;
  out.reserve(s.size());
  for (auto v : s) out.push_back(f[v]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

bool is_simplicial_map(const VertexMap& f, const CliqueComplex& src, const CliqueComplex& dst) {
  if (!total(f, src.graph().order(), dst.graph().order())) return false;
  // Clique complexes are flag: edges suffice.
  for (const auto& e : src.graph().edges())
    if (f[e.u] != f[e.v] && !dst.graph().adjacent(f[e.u], f[e.v])) return false;
  return true;
}

bool is_star_covering(const VertexMap& f, const CliqueComplex& src, const CliqueComplex& dst) {
  if (!is_simplicial_map(f, src, dst)) throw NotSimplicial("map is not simplicial");
  std::vector<std::size_t> hit;
  for (Vertex v = 0; v < src.graph().order(); ++v) {
    const auto& st = src.star(v);
    const auto& target = dst.star(f[v]);
    if (st.size() != target.size()) return false;
    hit.clear();
    for (auto si : st) {
      const auto& s = src.simplices()[si];
      auto img = image(f, s);
      if (img.size() != s.size()) return false;
      hit.push_back(*dst.index(img));
    }
    std::sort(hit.begin(), hit.end());
    if (std::adjacent_find(hit.begin(), hit.end()) != hit.end()) return false;
    if (hit != target) return false;
  }
  return true;
}

bool is_simplicial_covering(const VertexMap& f, const CliqueComplex& src, const CliqueComplex& dst) {
  if (!is_star_covering(f, src, dst)) return false;
  const auto& g = src.graph();
  const auto& h = dst.graph();
  for (Vertex v = 0; v < g.order(); ++v)
    if (src.label(v) != dst.label(f[v])) return false;
  for (const auto& e : g.edges()) {
    auto p = h.port_to(f[e.u], f[e.v]);
    auto q = h.port_to(f[e.v], f[e.u]);
    if (!p || !q || *p != e.pu || *q != e.pv) return false;
  }
  return true;
}

bool is_graph_covering(const VertexMap& f, const PortGraph& src, const PortGraph& dst) {
  if (!total(f, src.order(), dst.order())) return false;
  for (Vertex u = 0; u < src.order(); ++u) {
    if (src.degree(u) != dst.degree(f[u])) return false;
    for (Port p = 0; p < src.degree(u); ++p) {
      Vertex v = src.neighbour(u, p);
      if (f[u] == f[v] || !dst.adjacent(f[u], f[v])) return false;
      if (*dst.port_to(f[u], f[v]) != p) return false;
    }
  }
  for (Vertex u = 0; u < src.order(); ++u)
    if (binocular_label(src, u) != binocular_label(dst, f[u])) return false;
  return true;
}

bool coverings_agree(const VertexMap& f, const PortGraph& src, const PortGraph& dst) {
  bool graph_side = is_graph_covering(f, src, dst);
  CliqueComplex ks(src), kd(dst);
  bool simp_side = false;
  try {
    simp_side = is_simplicial_covering(f, ks, kd);
  } catch (const NotSimplicial&) {
    simp_side = false;
  }
  if (graph_side != simp_side)
    throw EquivalenceViolation(std::string("graph covering says ") + (graph_side ? "yes" : "no") +
                               ", simplicial covering says " + (simp_side ? "yes" : "no"));
  return graph_side;
}

void dump_complex(std::ostream& out, const CliqueComplex& k) {
  for (const auto& s : k.simplices()) {
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << s[i];
    out << "\n";
  }
}

VertexMap read_map(std::istream& in, std::size_t n_src, std::size_t n_dst) {
  std::vector<std::optional<Vertex>> f(n_src);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    long long a, b;
    if (!(ls >> tag >> a >> b) || tag != "m") throw GraphFormatError(lineno, "expected 'm <src> <dst>'");
    std::string extra;
    if (ls >> extra) throw GraphFormatError(lineno, "trailing token '" + extra + "'");
    if (a < 0 || std::size_t(a) >= n_src) throw GraphFormatError(lineno, "source vertex out of range");
    if (b < 0 || std::size_t(b) >= n_dst) throw GraphFormatError(lineno, "target vertex out of range");
    if (f[a]) throw GraphFormatError(lineno, "source vertex " + std::to_string(a) + " mapped twice");
    f[a] = Vertex(b);
  }
  VertexMap out(n_src);
  for (std::size_t v = 0; v < n_src; ++v) {
    if (!f[v]) throw GraphFormatError(lineno, "map not total: vertex " + std::to_string(v) + " unmapped");
    out[v] = *f[v];
  }
  return out;
}

VertexMap load_map(const std::string& path, std::size_t n_src, std::size_t n_dst) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_map(in, n_src, n_dst);
}

void write_map(std::ostream& out, const VertexMap& f) {
  for (std::size_t v = 0; v < f.size(); ++v) out << "m " << v << " " << f[v] << "\n";
}

}  // namespace binex
