#include "binex/homotopy.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

namespace binex {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

bool valid_step(const PortGraph& g, Vertex a, Vertex b) { return a == b || g.adjacent(a, b); }

bool is_triangle(const PortGraph& g, Vertex a, Vertex b, Vertex c) {
  return a != b && b != c && a != c && g.adjacent(a, b) && g.adjacent(b, c) && g.adjacent(a, c);
}

std::string key_of(const Loop& c, bool wide) {
  std::string k;
  k.resize(c.size() * (wide ? 4 : 2));
  char* p = k.data();
  for (Vertex v : c) {
    *p++ = char(v & 0xff);
    *p++ = char((v >> 8) & 0xff);
    if (wide) {
      *p++ = char((v >> 16) & 0xff);
      *p++ = char((v >> 24) & 0xff);
    }
  }
  return k;
}

Loop loop_of(const std::string& k, bool wide) {
  const std::size_t w = wide ? 4 : 2;
  Loop c(k.size() / w);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto* p = reinterpret_cast<const unsigned char*>(k.data() + i * w);
    Vertex v = Vertex(p[0]) | (Vertex(p[1]) << 8);
    if (wide) v |= (Vertex(p[2]) << 16) | (Vertex(p[3]) << 24);
    c[i] = v;
  }
  return c;
}

Loop splice(const Loop& c, std::size_t pos, std::size_t span, const std::vector<Vertex>& rep) {
  Loop out;
  out.reserve(c.size() - span - 1 + rep.size());
  out.insert(out.end(), c.begin(), c.begin() + pos);
  out.insert(out.end(), rep.begin(), rep.end());
  out.insert(out.end(), c.begin() + pos + span + 1, c.end());
  return out;
}

}  // namespace

SearchBudgetExceeded::SearchBudgetExceeded(std::size_t s)
    : std::runtime_error("search state cap reached after " + std::to_string(s) + " states"), states(s) {}

std::string to_string(MoveKind k) {
  switch (k) {
    case MoveKind::insert_backtrack: return "insert-backtrack";
    case MoveKind::delete_backtrack: return "delete-backtrack";
    case MoveKind::push_across: return "push-across";
    case MoveKind::merge_stationary: return "merge-stationary";
  }
  return "?";
}

std::string to_string(const HomotopyMove& m) {
  std::string s = to_string(m.kind) + " @" + std::to_string(m.position) + " span=" +
                  std::to_string(m.span) + " ->";
  for (auto v : m.replacement) s += " " + std::to_string(v);
  return s;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::budget_exceeded: return "budget-exceeded";
  }
  return "?";
}

bool is_loop(const Loop& c, const PortGraph& g) {
  if (c.empty() || c.front() != c.back()) return false;
  for (auto v : c)
    if (v >= g.order()) return false;
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (!valid_step(g, c[i], c[i + 1])) return false;
  return true;
}

Loop apply_move(const Loop& c, const HomotopyMove& m, const CliqueComplex& k) {
  const auto& g = k.graph();
  auto bad = [&](const std::string& why) {
    return std::invalid_argument("illegal " + to_string(m) + ": " + why);
  };
  if (m.position + m.span >= c.size()) throw bad("out of range");
  const auto& r = m.replacement;
  if (r.empty() || r.front() != c[m.position] || r.back() != c[m.position + m.span])
    throw bad("endpoints differ");
  const Vertex* q = c.data() + m.position;
  switch (m.kind) {
    case MoveKind::insert_backtrack:
      if (m.span != 0 || r.size() != 3 || r[1] == r[0] || !g.adjacent(r[0], r[1])) throw bad("not (u,v,u)");
      break;
    case MoveKind::delete_backtrack:
      if (m.span != 2 || r.size() != 1 || q[0] != q[2] || q[1] == q[0]) throw bad("not (u,v,u)");
      break;
    case MoveKind::merge_stationary:
      if (m.span != 1 || r.size() != 1 || q[0] != q[1]) throw bad("not stationary");
      break;
    case MoveKind::push_across: {
      if (m.span + (r.size() - 1) != 3) throw bad("q^-1 q' has length != 3");
      std::vector<Vertex> t(q, q + m.span + 1);
      std::reverse(t.begin(), t.end());
      t.insert(t.end(), r.begin() + 1, r.end());
      if (!is_triangle(g, t[0], t[1], t[2]) || t[3] != t[0]) throw bad("q^-1 q' is not a triangle");
      break;
    }
  }
  return splice(c, m.position, m.span, r);
}

Loop replay(const Loop& c, const std::vector<HomotopyMove>& moves, const CliqueComplex& k) {
  Loop cur = c;
  for (const auto& m : moves) cur = apply_move(cur, m, k);
  return cur;
}

std::vector<HomotopyMove> elementary_moves(const Loop& c, const CliqueComplex& k) {
  const auto& g = k.graph();
  std::vector<HomotopyMove> out;
  const std::size_t L = c.size();
  for (std::size_t i = 0; i < L; ++i) {
    const Vertex x = c[i];
    for (const auto& l : g.links(x)) out.push_back({MoveKind::insert_backtrack, i, 0, {x, l.to, x}});
    for (const auto& l : g.links(x))
      for (Vertex z : k.triangles_on(x, l.to))
        out.push_back({MoveKind::push_across, i, 0, {x, l.to, z, x}});
    if (i + 1 < L) {
      const Vertex y = c[i + 1];
      if (x == y) {
        out.push_back({MoveKind::merge_stationary, i, 1, {x}});
      } else {
        for (Vertex w : k.triangles_on(x, y)) out.push_back({MoveKind::push_across, i, 1, {x, w, y}});
      }
    }
    if (i + 2 < L) {
      const Vertex y = c[i + 1], z = c[i + 2];
      if (x == z && x != y) out.push_back({MoveKind::delete_backtrack, i, 2, {x}});
      else if (is_triangle(g, x, y, z)) out.push_back({MoveKind::push_across, i, 2, {x, z}});
    }
    if (i + 3 < L && c[i + 3] == x && is_triangle(g, x, c[i + 1], c[i + 2]))
      out.push_back({MoveKind::push_across, i, 3, {x}});
  }
  return out;
}

std::vector<Loop> homotopy_neighbors(const Loop& c, const CliqueComplex& k) {
  std::vector<Loop> out;
  for (const auto& m : elementary_moves(c, k)) out.push_back(splice(c, m.position, m.span, m.replacement));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct Node {
  std::string key;
  std::uint32_t parent;
  std::uint32_t g;
  bool closed;
  HomotopyMove move;
};

std::vector<HomotopyMove> trace_back(const std::vector<Node>& nodes, std::uint32_t id) {
  std::vector<HomotopyMove> out;
  while (nodes[id].parent != id) {
    out.push_back(nodes[id].move);
    id = nodes[id].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::size_t shrink_rate(const CliqueComplex& k) { return k.count(2) > 0 ? 3 : 2; }

std::size_t lower_bound_moves(std::size_t len, std::size_t rate) {
  const std::size_t steps = len - 1;
  return (steps + rate - 1) / rate;
}

// Best-first search from c. Exact mode is A* with an admissible, consistent
// heuristic, pruned by the budget; greedy mode orders by loop length only.
ContractResult search(const Loop& c, const CliqueComplex& k, std::size_t budget, std::size_t cap,
                      bool greedy) {
  ContractResult res;
  const bool wide = k.graph().order() > 0xffff;
  const std::size_t rate = shrink_rate(k);
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::uint32_t> ids;
  using Entry = std::pair<std::uint64_t, std::uint32_t>;  // (priority, node)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t tick = 0;
  auto priority = [&](std::size_t g, std::size_t len) -> std::uint64_t {
    // ties broken toward deeper nodes, then FIFO
    std::uint64_t f = greedy ? len : g + lower_bound_moves(len, rate);
    return (f << 40) | (std::uint64_t(0xffff - std::min<std::size_t>(g, 0xffff)) << 24) | (tick++ & 0xffffff);
  };
  if (!greedy && lower_bound_moves(c.size(), rate) > budget) {
    res.verdict = Verdict::no;
    return res;
  }
  nodes.push_back({key_of(c, wide), 0, 0, false, {}});
  ids.emplace(nodes[0].key, 0);
  open.push({priority(0, c.size()), 0});
  while (!open.empty()) {
    auto [pri, id] = open.top();
    open.pop();
    if (nodes[id].closed) continue;
    if (!greedy && (pri >> 40) != nodes[id].g + lower_bound_moves(nodes[id].key.size() / (wide ? 4 : 2), rate))
      continue;  // stale entry
    nodes[id].closed = true;
    Loop cur = loop_of(nodes[id].key, wide);
    if (cur.size() == 1) {
      res.verdict = Verdict::yes;
      res.certificate = trace_back(nodes, id);
      res.states = nodes.size();
      return res;
    }
    const std::uint32_t g1 = nodes[id].g + 1;
    if (g1 > budget) continue;
    for (auto& m : elementary_moves(cur, k)) {
      Loop child = splice(cur, m.position, m.span, m.replacement);
      if (!greedy && g1 + lower_bound_moves(child.size(), rate) > budget) continue;
      std::string ck = key_of(child, wide);
      auto it = ids.find(ck);
      if (it != ids.end()) {
        Node& nd = nodes[it->second];
        if (nd.closed || nd.g <= g1) continue;
        nd.g = g1;
        nd.parent = id;
        nd.move = std::move(m);
        open.push({priority(g1, child.size()), it->second});
        continue;
      }
      if (nodes.size() >= cap) {
        res.verdict = Verdict::budget_exceeded;
        res.states = nodes.size();
        return res;
      }
      auto nid = static_cast<std::uint32_t>(nodes.size());
      ids.emplace(ck, nid);
      nodes.push_back({std::move(ck), id, g1, false, std::move(m)});
      open.push({priority(g1, child.size()), nid});
    }
  }
  res.verdict = Verdict::no;
  res.states = nodes.size();
  return res;
}

bool is_simple_cycle(const Loop& c) {
  if (c.size() < 4 || c.front() != c.back()) return false;
  std::vector<Vertex> body(c.begin(), c.end() - 1);
  std::sort(body.begin(), body.end());
  return std::adjacent_find(body.begin(), body.end()) == body.end();
}

bool certificate_ok(const Loop& c, const std::vector<HomotopyMove>& cert, const CliqueComplex& k) {
  try {
    return replay(c, cert, k).size() == 1;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

}  // namespace

std::optional<std::vector<HomotopyMove>> shelling_certificate(const Loop& c, const CliqueComplex& k) {
  if (!is_simple_cycle(c)) return std::nullopt;
  const auto& g = k.graph();
  const std::size_t L = c.size() - 1;
  auto ekey = [](Vertex a, Vertex b) { return a < b ? (std::uint64_t(a) << 32 | b) : (std::uint64_t(b) << 32 | a); };
  std::set<std::uint64_t> boundary;
  for (std::size_t i = 0; i < L; ++i) boundary.insert(ekey(c[i], c[i + 1]));

  // Faces reachable from each boundary edge without crossing the boundary.
  using Face = std::array<Vertex, 3>;
  auto face_of = [](Vertex a, Vertex b, Vertex d) {
    Face f{a, b, d};
    std::sort(f.begin(), f.end());
    return f;
  };
  std::vector<std::vector<Face>> regions;
  std::set<Face> assigned;
  for (std::size_t i = 0; i < L; ++i) {
    for (Vertex w : k.triangles_on(c[i], c[i + 1])) {
      Face f0 = face_of(c[i], c[i + 1], w);
      if (assigned.count(f0)) continue;
      std::vector<Face> region{f0};
      assigned.insert(f0);
      for (std::size_t q = 0; q < region.size(); ++q) {
        if (region.size() > 4 * g.order() * g.order()) return std::nullopt;
        Face f = region[q];
        for (int e = 0; e < 3; ++e) {
          Vertex a = f[e], b = f[(e + 1) % 3];
          if (boundary.count(ekey(a, b))) continue;
          for (Vertex w2 : k.triangles_on(a, b)) {
            Face f2 = face_of(a, b, w2);
            if (assigned.insert(f2).second) region.push_back(f2);
          }
        }
      }
      regions.push_back(std::move(region));
    }
  }
  // Keep regions that are disks bounded exactly by c.
  std::vector<std::vector<Face>> disks;
  for (auto& region : regions) {
    std::map<std::uint64_t, int> ecount;
    std::set<Vertex> verts;
    for (const auto& f : region)
      for (int e = 0; e < 3; ++e) {
        ++ecount[ekey(f[e], f[(e + 1) % 3])];
        verts.insert(f[e]);
      }
    bool ok = true;
    std::size_t bseen = 0;
    for (auto [e, n] : ecount) {
      if (boundary.count(e)) {
        ok = ok && n == 1;
        ++bseen;
      } else {
        ok = ok && n == 2;
      }
    }
    ok = ok && bseen == L &&
         long(verts.size()) - long(ecount.size()) + long(region.size()) == 1;
    if (ok) disks.push_back(std::move(region));
  }
  std::sort(disks.begin(), disks.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });

  for (const auto& disk : disks) {
    std::set<Face> remaining(disk.begin(), disk.end());
    std::map<Vertex, int> vface;
    for (const auto& f : disk)
      for (auto v : f) ++vface[v];
    Loop cur = c;
    std::vector<HomotopyMove> cert;
    bool stuck = false;
    while (!stuck && !remaining.empty()) {
      const std::size_t n = cur.size() - 1;
      if (n == 3 && remaining.size() == 1) {
        cert.push_back({MoveKind::push_across, 0, 3, {cur[0]}});
        remaining.clear();
        break;
      }
      // ear: (x, y, z) with y off the basepoint and in a single remaining face
      bool moved = false;
      for (std::size_t i = 1; i < n && !moved; ++i) {
        Vertex x = cur[i - 1], y = cur[i], z = cur[i + 1];
        if (x == z || vface[y] != 1) continue;
        Face f = face_of(x, y, z);
        if (!remaining.count(f)) continue;
        cert.push_back({MoveKind::push_across, i - 1, 2, {x, z}});
        cur.erase(cur.begin() + i);
        remaining.erase(f);
        for (auto v : f) --vface[v];
        moved = true;
      }
      if (moved) continue;
      // expansion: boundary edge (x, z) whose remaining face has an interior apex
      std::set<Vertex> on_loop(cur.begin(), cur.end());
      for (std::size_t i = 0; i < n && !moved; ++i) {
        Vertex x = cur[i], z = cur[i + 1];
        for (Vertex y : k.triangles_on(x, z)) {
          Face f = face_of(x, y, z);
          if (!remaining.count(f) || on_loop.count(y)) continue;
          cert.push_back({MoveKind::push_across, i, 1, {x, y, z}});
          cur.insert(cur.begin() + i + 1, y);
          remaining.erase(f);
          for (auto v : f) --vface[v];
          moved = true;
          break;
        }
      }
      stuck = !moved;
    }
    if (!stuck && certificate_ok(c, cert, k)) return cert;
  }
  return std::nullopt;
}

ContractResult contract(const Loop& c, const CliqueComplex& k, std::size_t budget, const SearchOptions& opt) {
  if (!is_loop(c, k.graph())) throw std::invalid_argument("not a loop of the complex");
  ContractResult res;
  if (c.size() == 1) {
    res.verdict = Verdict::yes;
    return res;
  }
  if (opt.use_witnesses) {
    if (c.size() == 3 && c[0] == c[2] && c[0] != c[1]) {
      res.verdict = budget >= 1 ? Verdict::yes : Verdict::no;
      if (budget >= 1) res.certificate = {{MoveKind::delete_backtrack, 0, 2, {c[0]}}};
      return res;
    }
    if (auto cert = shelling_certificate(c, k); cert && cert->size() <= budget) {
      res.verdict = Verdict::yes;
      res.certificate = std::move(*cert);
      return res;
    }
    if (opt.greedy_cap > 0) {
      auto gr = search(c, k, budget, opt.greedy_cap, true);
      if (gr.verdict == Verdict::yes && gr.certificate.size() <= budget) {
        gr.states = 0;
        return gr;
      }
    }
  }
  res = search(c, k, budget, opt.state_cap, false);
  if (res.verdict == Verdict::yes && !certificate_ok(c, res.certificate, k))
    throw std::logic_error("search produced an invalid certificate");
  return res;
}

bool is_k_contractible(const Loop& c, const CliqueComplex& k, std::size_t budget, const SearchOptions& opt) {
  auto r = contract(c, k, budget, opt);
  if (r.verdict == Verdict::budget_exceeded) throw SearchBudgetExceeded(r.states);
  return r.verdict == Verdict::yes;
}

namespace {

template <bool Chordless>
std::vector<Loop> cycles_impl(const PortGraph& g, const CycleOptions& opt) {
  std::vector<Loop> out;
  std::size_t steps = 0;
  const std::size_t n = g.order();
  std::vector<char> on(n, 0);
  Loop path;
  std::function<void(Vertex)> dfs = [&](Vertex s) {
    const Vertex last = path.back();
    for (const auto& l : g.links(last)) {
      const Vertex w = l.to;
      if (w <= s || on[w]) continue;
      if (++steps > opt.step_cap) throw BudgetExceeded("cycle enumeration step cap reached");
      if (Chordless) {
        bool chord = false;
        for (std::size_t i = 1; i + 1 < path.size() && !chord; ++i) chord = g.adjacent(w, path[i]);
        if (chord) continue;
      }
      const bool closes = path.size() >= 2 && g.adjacent(w, s);
      if (closes && path[1] < w) {
        Loop c = path;
        c.push_back(w);
        c.push_back(s);
        out.push_back(std::move(c));
        if (out.size() > opt.cycle_cap) throw BudgetExceeded("more than " + std::to_string(opt.cycle_cap) + " cycles");
      }
      if (Chordless && closes) continue;
      on[w] = 1;
      path.push_back(w);
      dfs(s);
      path.pop_back();
      on[w] = 0;
    }
  };
  for (Vertex s = 0; s < n; ++s) {
    path = {s};
    on[s] = 1;
    dfs(s);
    on[s] = 0;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Loop> simple_cycles(const PortGraph& g, const CycleOptions& opt) { return cycles_impl<false>(g, opt); }
std::vector<Loop> chordless_cycles(const PortGraph& g, const CycleOptions& opt) { return cycles_impl<true>(g, opt); }

std::vector<Loop> based_variants(const Loop& c) {
  std::vector<Loop> out;
  const std::size_t L = c.size() - 1;
  std::vector<Vertex> body(c.begin(), c.end() - 1);
  for (int dir = 0; dir < 2; ++dir) {
    for (std::size_t r = 0; r < L; ++r) {
      Loop v;
      for (std::size_t i = 0; i <= L; ++i) v.push_back(body[(r + i) % L]);
      out.push_back(std::move(v));
    }
    std::reverse(body.begin(), body.end());
  }
  return out;
}

std::vector<std::size_t> chord_split_bounds(const std::vector<std::size_t>& chordless, std::size_t max_len) {
  std::vector<std::size_t> b(max_len + 1, 0);
  for (std::size_t len = 3; len <= max_len; ++len) {
    std::size_t v = len < chordless.size() ? chordless[len] : 0;
    for (std::size_t a = 3; a + 3 <= len + 2 && a < len; ++a) {
      std::size_t c = len + 2 - a;
      if (c < 3 || c >= len) continue;
      v = std::max(v, 1 + b[a] + b[c]);
    }
    b[len] = v;
  }
  return b;
}

CycleContractibility::CycleContractibility(const PortGraph& g, SearchOptions search, CycleOptions cycles)
    : g_(&g), cx_(g), search_(search), cycle_opt_(cycles) {}

void CycleContractibility::prepare() {
  if (prepared_) return;
  prepared_ = true;
  try {
    cycles_ = simple_cycles(*g_, cycle_opt_);
  } catch (const BudgetExceeded&) {
    literal_ = false;
    cycles_.clear();
    prepare_certified();
    return;
  }
  std::stable_sort(cycles_.begin(), cycles_.end(), [](const Loop& a, const Loop& b) { return a.size() < b.size(); });
  best_.assign(cycles_.size(), kNone);
  refuted_.assign(cycles_.size(), 0);
  SearchOptions witness_only = search_;
  witness_only.state_cap = 0;
  for (std::size_t i = 0; i < cycles_.size(); ++i) {
    if (!search_.use_witnesses) break;
    auto r = contract(cycles_[i], cx_, kNone - 1, witness_only);
    if (r.verdict == Verdict::yes) best_[i] = r.certificate.size();
  }
}

void CycleContractibility::prepare_certified() {
  auto chordless = chordless_cycles(*g_, cycle_opt_);
  std::vector<std::size_t> per_len(g_->order() + 1, 0);
  for (const auto& c : chordless) {
    for (const auto& v : based_variants(c)) {
      auto r = contract(v, cx_, 4 * g_->order() + 8, search_);
      if (r.verdict != Verdict::yes) {
        certified_gap_ = v;
        return;
      }
      const std::size_t len = v.size() - 1;
      per_len[len] = std::max(per_len[len], r.certificate.size());
    }
  }
  auto b = chord_split_bounds(per_len, g_->order());
  certified_bound_ = *std::max_element(b.begin(), b.end());
}

AllCyclesReport CycleContractibility::query(std::size_t k) {
  prepare();
  AllCyclesReport rep;
  if (!literal_) {
    rep.certified_route = true;
    if (certified_gap_) {
      rep.verdict = Verdict::budget_exceeded;
      rep.witness = certified_gap_;
      return rep;
    }
    rep.bound = *certified_bound_;
    rep.verdict = rep.bound <= k ? Verdict::yes : Verdict::budget_exceeded;
    return rep;
  }
  SearchOptions exact = search_;
  exact.use_witnesses = false;
  rep.verdict = Verdict::yes;
  for (std::size_t i = 0; i < cycles_.size(); ++i) {
    ++rep.cycles;
    if (best_[i] <= k) {
      rep.bound = std::max(rep.bound, best_[i]);
      continue;
    }
    if (refuted_[i] >= k && refuted_[i] > 0) {
      rep.verdict = Verdict::no;
      rep.witness = cycles_[i];
      return rep;
    }
    auto r = contract(cycles_[i], cx_, k, exact);
    if (r.verdict == Verdict::yes) {
      best_[i] = r.certificate.size();
      rep.bound = std::max(rep.bound, best_[i]);
      continue;
    }
    rep.verdict = r.verdict;
    rep.witness = cycles_[i];
    if (r.verdict == Verdict::no) refuted_[i] = std::max(refuted_[i], k);
    return rep;
  }
  return rep;
}

AllCyclesReport all_simple_cycles_report(const PortGraph& g, std::size_t k, const SearchOptions& search,
                                         const CycleOptions& cycles) {
  CycleContractibility cc(g, search, cycles);
  return cc.query(k);
}

bool all_simple_cycles_k_contractible(const PortGraph& g, std::size_t k, const SearchOptions& search,
                                      const CycleOptions& cycles) {
  auto r = all_simple_cycles_report(g, k, search, cycles);
  if (r.verdict == Verdict::budget_exceeded) throw SearchBudgetExceeded(0);
  return r.verdict == Verdict::yes;
}

}  // namespace binex
