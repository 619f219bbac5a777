#include "binex/cover.hpp"

#include <algorithm>
#include <deque>

namespace binex {

StarDeveloper::StarDeveloper(const PortGraph& base) : base_(&base), base_labels_(all_labels(base)) {
  for (const auto& l : base_labels_) base_label_ids_.push_back(intern(l));
}

int StarDeveloper::intern(const BinocularLabel& l) {
  auto [it, fresh] = label_ids_.try_emplace(l, static_cast<int>(labels_.size()));
  if (fresh) labels_.push_back(l);
  return it->second;
}

StarDeveloper::Id StarDeveloper::add_vertex(Vertex projection) {
  const auto id = static_cast<Id>(entries_.size());
  Entry e;
  e.parent = id;
  e.proj = projection;
  if (base_ && projection != kUnknown) e.label = base_label_ids_[projection];
  entries_.push_back(std::move(e));
  todo_.insert(id);
  ++live_;
  return id;
}

StarDeveloper::Id StarDeveloper::find(Id x) const {
  Id r = x;
  while (entries_[r].parent != r) r = entries_[r].parent;
  while (entries_[x].parent != r) {
    Id next = entries_[x].parent;
    entries_[x].parent = r;
    x = next;
  }
  return r;
}

void StarDeveloper::set_label(Id x, const BinocularLabel& l) {
  x = find(x);
  int id = intern(l);
  if (entries_[x].label >= 0 && entries_[x].label != id)
    throw InconsistentStar("observed label differs from the developed one at lift " + std::to_string(x));
  entries_[x].label = id;
}

std::optional<StarDeveloper::Arc> StarDeveloper::arc(Id x, Port p) const {
  const auto& a = entries_[find(x)].arcs;
  auto it = a.find(p);
  if (it == a.end()) return std::nullopt;
  return Arc{find(it->second.to), it->second.back};
}

std::vector<std::pair<Port, StarDeveloper::Arc>> StarDeveloper::arcs(Id x) const {
  std::vector<std::pair<Port, Arc>> out;
  for (const auto& [p, a] : entries_[find(x)].arcs) out.push_back({p, Arc{find(a.to), a.back}});
  return out;
}

void StarDeveloper::merge(Id a, Id b) {
  std::deque<std::pair<Id, Id>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.front();
    work.pop_front();
    x = find(x);
    y = find(y);
    if (x == y) continue;
    if (y < x) std::swap(x, y);
    Entry& ex = entries_[x];
    Entry& ey = entries_[y];
    if (ex.proj != kUnknown && ey.proj != kUnknown && ex.proj != ey.proj)
      throw InconsistentStar("folding lifts of different vertices " + std::to_string(ex.proj) + " and " +
                             std::to_string(ey.proj));
    if (ex.label >= 0 && ey.label >= 0 && ex.label != ey.label)
      throw InconsistentStar("folding lifts with different labels");
    if (ex.proj == kUnknown) ex.proj = ey.proj;
    if (ex.label < 0) ex.label = ey.label;
    ey.parent = x;
    ex.complete = false;
    todo_.erase(y);
    todo_.insert(x);
    --live_;
    ++merges_;
    for (auto& [p, arc] : ey.arcs) {
      auto it = ex.arcs.find(p);
      if (it == ex.arcs.end()) {
        ex.arcs.emplace(p, arc);
      } else {
        if (it->second.back != arc.back) throw InconsistentStar("port " + std::to_string(p) + " has two back-ports");
        work.emplace_back(it->second.to, arc.to);
      }
    }
    ey.arcs.clear();
  }
}

void StarDeveloper::connect(Id a, Port pa, Id b, Port pb) {
  a = find(a);
  b = find(b);
  if (a == b) throw InconsistentStar("two ports lead to one lifted neighbour");
  if (auto ar = arc(a, pa)) {
    if (ar->back != pb) throw InconsistentStar("neighbour edge ports disagree");
    if (ar->to != b) merge(ar->to, b);
    return;
  }
  if (auto br = arc(b, pb)) {
    if (br->back != pa) throw InconsistentStar("neighbour edge ports disagree");
    if (br->to != a) merge(br->to, a);
    return;
  }
  entries_[a].arcs[pa] = {b, pb};
  entries_[b].arcs[pb] = {a, pa};
}

void StarDeveloper::complete_star(Id x) {
  x = find(x);
  if (entries_[x].label < 0) throw std::logic_error("completing a lift with unknown label");
  const BinocularLabel l = labels_[entries_[x].label];
  const std::size_t before = merges_;
  for (auto& [p, arc] : entries_[x].arcs)
    if (p >= l.degree) throw InconsistentStar("lift has more ports than its label");
  for (Port p = 0; p < l.degree; ++p) {
    if (auto ar = arc(x, p)) {
      if (ar->back != l.back_ports[p]) throw InconsistentStar("back-port mismatch at port " + std::to_string(p));
      continue;
    }
    Vertex proj = kUnknown;
    if (base_ && entries_[x].proj != kUnknown) proj = base_->neighbour(entries_[x].proj, p);
    Id y = add_vertex(proj);
    entries_[x].arcs[p] = {y, l.back_ports[p]};
    entries_[y].arcs[l.back_ports[p]] = {x, p};
  }
  for (const auto& e : l.neighbour_edges) {
    if (find(x) != x) break;  // folded away; the survivor is queued again
    connect(arc(x, e.i)->to, e.at_i, arc(x, e.j)->to, e.at_j);
  }
  if (merges_ == before) {
    entries_[x].complete = true;
    todo_.erase(x);
  }
}

std::optional<StarDeveloper::Id> StarDeveloper::next_incomplete() const {
  if (todo_.empty()) return std::nullopt;
  return *todo_.begin();
}

std::vector<StarDeveloper::Id> StarDeveloper::live_vertices() const {
  std::vector<Id> out;
  for (Id i = 0; i < entries_.size(); ++i)
    if (find(i) == i) out.push_back(i);
  return out;
}

std::vector<std::size_t> StarDeveloper::distances(Id root) const {
  std::vector<std::size_t> d(entries_.size(), std::numeric_limits<std::size_t>::max());
  root = find(root);
  d[root] = 0;
  std::deque<Id> q{root};
  while (!q.empty()) {
    Id u = q.front();
    q.pop_front();
    for (const auto& [p, a] : entries_[u].arcs) {
      Id w = find(a.to);
      if (d[w] == std::numeric_limits<std::size_t>::max()) {
        d[w] = d[u] + 1;
        q.push_back(w);
      }
    }
  }
  return d;
}

PortGraph StarDeveloper::extract(std::vector<Id>* order) const {
  auto ids = live_vertices();
  std::vector<Vertex> local(entries_.size(), 0);
  for (Vertex i = 0; i < ids.size(); ++i) local[ids[i]] = i;
  std::vector<EdgeRecord> edges;
  for (Vertex i = 0; i < ids.size(); ++i)
    for (const auto& [p, a] : entries_[ids[i]].arcs) {
      Vertex j = local[find(a.to)];
      if (i < j) edges.push_back({i, j, p, a.back});
      else if (i == j) throw InconsistentStar("folded lift is its own neighbour");
    }
  if (order) *order = ids;
  try {
    return PortGraph(ids.size(), edges);
  } catch (const InvalidGraph& e) {
    throw InconsistentStar(std::string("developed cover is not a port graph: ") + e.what());
  }
}

CoverResult universal_cover(const PortGraph& g, Vertex base, std::size_t vertex_budget, const CoverOptions& opt) {
  if (vertex_budget < 1) throw std::invalid_argument("vertex budget must be at least 1");
  if (base >= g.order()) throw std::invalid_argument("base vertex out of range");
  CoverResult res;
  StarDeveloper dev(g);
  dev.add_vertex(base);
  while (auto x = dev.next_incomplete()) {
    dev.complete_star(*x);
    if (dev.live_count() > vertex_budget) {
      res.status = CoverStatus::budget_exceeded;
      res.developed = dev.created();
      return res;
    }
  }
  std::vector<StarDeveloper::Id> order;
  res.cover = dev.extract(&order);
  res.map.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) res.map[i] = dev.projection(order[i]);
  res.status = CoverStatus::finite;
  res.developed = dev.created();
  res.sheets = res.cover.order() / g.order();

  if (!opt.verify) return res;
  if (!is_graph_covering(res.map, res.cover, g)) throw KernelFault("developed cover fails the graph covering check");
  CliqueComplex kc(res.cover), kg(g);
  if (!is_simplicial_covering(res.map, kc, kg))
    throw KernelFault("developed cover fails the simplicial covering check");
  std::vector<std::size_t> fibre(g.order(), 0);
  for (auto v : res.map) ++fibre[v];
  if (std::any_of(fibre.begin(), fibre.end(), [&](std::size_t f) { return f != res.sheets; }) ||
      res.sheets * g.order() != res.cover.order())
    throw KernelFault("fibres of the developed cover have unequal sizes");
  res.cycles = all_simple_cycles_report(res.cover, opt.verify_budget, opt.search, opt.cycles);
  if (res.cycles.verdict != Verdict::yes)
    throw KernelFault("simple cycles of the developed cover not contractible within " +
                      std::to_string(opt.verify_budget) + " moves (" + to_string(res.cycles.verdict) + ")");
  return res;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::SC: return "SC";
    case Classification::FNT_not_SC: return "FNT_not_SC";
    case Classification::ExceedsBudget: return "ExceedsBudget";
  }
  return "?";
}

ClassifyResult classify(const PortGraph& g, std::size_t vertex_budget, const CoverOptions& opt) {
  auto r = universal_cover(g, 0, vertex_budget, opt);
  if (r.status != CoverStatus::finite) return {Classification::ExceedsBudget, 0};
  return {r.sheets == 1 ? Classification::SC : Classification::FNT_not_SC, r.sheets};
}

std::vector<std::uint32_t> bfs_code(const PortGraph& g, Vertex base) {
  const std::size_t n = g.order();
  std::vector<std::uint32_t> idx(n, std::numeric_limits<std::uint32_t>::max());
  std::vector<Vertex> order{base};
  idx[base] = 0;
  for (std::size_t q = 0; q < order.size(); ++q)
    for (const auto& l : g.links(order[q]))
      if (idx[l.to] == std::numeric_limits<std::uint32_t>::max()) {
        idx[l.to] = static_cast<std::uint32_t>(order.size());
        order.push_back(l.to);
      }
  std::vector<std::uint32_t> code{static_cast<std::uint32_t>(n)};
  for (Vertex v : order) {
    code.push_back(g.degree(v));
    for (const auto& l : g.links(v)) {
      code.push_back(idx[l.to]);
      code.push_back(l.back);
    }
  }
  return code;
}

std::vector<std::uint32_t> canonical_code(const PortGraph& g) {
  std::vector<std::uint32_t> best = bfs_code(g, 0);
  for (Vertex v = 1; v < g.order(); ++v) best = std::min(best, bfs_code(g, v));
  return best;
}

std::optional<VertexMap> pair_from(const PortGraph& a, Vertex a0, const PortGraph& b, Vertex b0) {
  if (a.order() != b.order() || a.size() != b.size()) return std::nullopt;
  constexpr Vertex kFree = std::numeric_limits<Vertex>::max();
  VertexMap f(a.order(), kFree);
  std::vector<Vertex> inv(b.order(), kFree);
  std::deque<Vertex> q{a0};
  f[a0] = b0;
  inv[b0] = a0;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    if (a.degree(u) != b.degree(f[u])) return std::nullopt;
    for (Port p = 0; p < a.degree(u); ++p) {
      const auto& la = a.link(u, p);
      const auto& lb = b.link(f[u], p);
      if (la.back != lb.back) return std::nullopt;
      if (f[la.to] == kFree) {
        if (inv[lb.to] != kFree) return std::nullopt;
        f[la.to] = lb.to;
        inv[lb.to] = la.to;
        q.push_back(la.to);
      } else if (f[la.to] != lb.to) {
        return std::nullopt;
      }
    }
  }
  return f;
}

std::optional<VertexMap> find_isomorphism(const PortGraph& a, const PortGraph& b) {
  if (a.order() != b.order()) return std::nullopt;
  for (Vertex b0 = 0; b0 < b.order(); ++b0)
    if (auto f = pair_from(a, 0, b, b0)) return f;
  return std::nullopt;
}

}  // namespace binex
