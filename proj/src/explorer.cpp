#include "binex/explorer.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <ostream>
#include <sstream>

#include "binex/hash.hpp"

namespace binex {

InvalidMove::InvalidMove(std::size_t step, Port port, Port degree)
    : std::runtime_error("step " + std::to_string(step) + ": port " + std::to_string(port) +
                         " absent (degree " + std::to_string(degree) + ")") {}

std::uint64_t Observation::hash() const {
  return hash_combine(label.hash(), entry_port ? std::uint64_t(*entry_port) + 1 : 0);
}

std::string Action::str() const { return kind == Kind::halt ? "H" : "M" + std::to_string(port); }

std::size_t AgentTrace::visited_count() const { return std::count(visited.begin(), visited.end(), 1); }

AgentTrace run_agent(const PortGraph& g, Vertex v0, AgentProgram& agent, std::size_t move_budget,
                     const RunOptions& opt) {
  const auto labels = all_labels(g);
  AgentTrace t;
  t.visited.assign(g.order(), 0);
  Vertex pos = v0;
  std::optional<Port> entry;
  t.visited[pos] = 1;
  while (true) {
    Observation obs{labels[pos], entry};
    Action a = agent.step(obs);
    TraceStep s{t.step_count++, obs.hash(), agent.memory_digest(), a, pos};
    if (opt.record) t.steps.push_back(s);
    if (opt.on_step) opt.on_step(s);
    if (a.kind == Action::Kind::halt) {
      t.halted = true;
      break;
    }
    if (a.port >= g.degree(pos)) throw InvalidMove(s.index, a.port, g.degree(pos));
    if (t.moves >= move_budget) break;
    const auto& l = g.link(pos, a.port);
    pos = l.to;
    entry = l.back;
    ++t.moves;
    t.visited[pos] = 1;
  }
  t.final_pos = pos;
  return t;
}

void write_trace_line(std::ostream& out, const TraceStep& s) {
  out << s.index << " " << std::hex << s.obs_hash << " " << s.digest << std::dec << " " << s.action.str()
      << " " << s.pos << "\n";
}

std::string to_string(Acquisition a) { return a == Acquisition::walk_tree ? "walk-tree" : "cover-ball"; }

struct FntExplorer::CheckCache {
  PortGraph h;
  std::optional<CycleContractibility> cc;
};

FntExplorer::FntExplorer(ExplorerConfig cfg) : cfg_(std::move(cfg)) {}
FntExplorer::~FntExplorer() = default;

void FntExplorer::begin_phase(const Observation& obs) {
  ++k_;
  depth_ = 2 * k_;
  forest_ = std::make_shared<ViewForest>();
  view0_.reset();
  if (cfg_.acquisition == Acquisition::walk_tree) {
    stack_.clear();
    stack_.push_back({forest_->intern_label(obs.label), 0, std::nullopt, {}});
    pending_ = Pending::none;
  } else {
    dev_ = std::make_unique<StarDeveloper>();
    root_ = cur_ = dev_->add_vertex();
    dev_->set_label(root_, obs.label);
    route_.clear();
    moved_.reset();
    returning_ = false;
  }
}

void FntExplorer::observe(const Observation& obs) {
  if (cfg_.acquisition == Acquisition::walk_tree) {
    if (pending_ == Pending::descend) {
      stack_.push_back({forest_->intern_label(obs.label), 0, obs.entry_port, {}});
    } else if (pending_ == Pending::ascend) {
      stack_.back().children.push_back(returned_);
    }
    pending_ = Pending::none;
    return;
  }
  if (!moved_) return;
  auto arc = dev_->arc(cur_, *moved_);
  if (!arc || !obs.entry_port || arc->back != *obs.entry_port)
    throw InconsistentStar("arrival port disagrees with the developed ball");
  cur_ = arc->to;
  dev_->set_label(cur_, obs.label);
  moved_.reset();
}

std::optional<Port> FntExplorer::next_move_walk_tree() {
  while (true) {
    Frame& top = stack_.back();
    const std::size_t depth = stack_.size() - 1;
    const Port deg = forest_->label(top.label).degree;
    if (depth < depth_ && top.next_port < deg) {
      pending_ = Pending::descend;
      return top.next_port++;
    }
    ViewNodeId node = forest_->make(top.label, std::move(top.children));
    if (stack_.size() == 1) {
      view0_ = node;
      stack_.clear();
      return std::nullopt;
    }
    const Port back = *top.entry;
    stack_.pop_back();
    returned_ = {Port(stack_.back().next_port - 1), back, node};
    pending_ = Pending::ascend;
    return back;
  }
}

namespace {

std::vector<Port> route(const StarDeveloper& dev, StarDeveloper::Id from, StarDeveloper::Id to) {
  from = dev.find(from);
  to = dev.find(to);
  std::map<StarDeveloper::Id, std::pair<StarDeveloper::Id, Port>> prev;
  std::deque<StarDeveloper::Id> q{from};
  prev[from] = {from, 0};
  while (!q.empty() && !prev.count(to)) {
    auto u = q.front();
    q.pop_front();
    for (const auto& [p, a] : dev.arcs(u)) {
      if (!prev.count(a.to)) {
        prev[a.to] = {u, p};
        q.push_back(a.to);
      }
    }
  }
  if (!prev.count(to)) throw std::logic_error("developed ball is disconnected");
  std::vector<Port> out;
  for (auto v = to; v != from; v = prev[v].first) out.push_back(prev[v].second);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<Port> FntExplorer::next_move_cover_ball() {
  while (true) {
    if (!route_.empty()) {
      Port p = route_.front();
      route_.erase(route_.begin());
      moved_ = p;
      return p;
    }
    if (returning_) {
      view0_ = cover_ball_view();
      returning_ = false;
      return std::nullopt;
    }
    auto dist = dev_->distances(root_);
    std::optional<StarDeveloper::Id> target;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (auto x : dev_->live_vertices()) {
      const std::size_t d = dist[x];
      const bool need = (d < depth_ && !dev_->complete(x)) || (d == depth_ && !dev_->has_label(x));
      if (need && d < best) {
        best = d;
        target = x;
      }
    }
    if (!target) {
      returning_ = true;
      route_ = route(*dev_, cur_, root_);
      continue;
    }
    if (dev_->has_label(*target)) {
      dev_->complete_star(*target);
      cur_ = dev_->find(cur_);
      root_ = dev_->find(root_);
      continue;
    }
    route_ = route(*dev_, cur_, *target);
  }
}

ViewNodeId FntExplorer::cover_ball_view() {
  auto dist = dev_->distances(root_);
  auto ids = dev_->live_vertices();
  std::map<StarDeveloper::Id, LabelId> lid;
  for (auto x : ids)
    if (dist[x] <= depth_) lid[x] = forest_->intern_label(dev_->label(x));
  std::map<StarDeveloper::Id, ViewNodeId> layer;
  for (auto x : ids)
    if (dist[x] <= depth_) layer[x] = forest_->make(lid[x], {});
  for (std::size_t r = 1; r <= depth_; ++r) {
    std::map<StarDeveloper::Id, ViewNodeId> next;
    for (auto x : ids) {
      if (dist[x] > depth_ || dist[x] + r > depth_) continue;
      std::vector<ViewChild> kids;
      for (Port p = 0; p < dev_->label(x).degree; ++p) {
        auto a = dev_->arc(x, p);
        kids.push_back({p, a->back, layer.at(a->to)});
      }
      next[x] = forest_->make(lid[x], std::move(kids));
    }
    layer = std::move(next);
  }
  return layer.at(dev_->find(root_));
}

Verdict FntExplorer::halting_check(const PortGraph& h, bool* certified) {
  auto code = canonical_code(h);
  auto& slot = checks_[code];
  if (!slot) {
    slot = std::make_unique<CheckCache>();
    slot->h = h;
    slot->cc.emplace(slot->h, cfg_.search, cfg_.cycles);
  }
  auto rep = slot->cc->query(k_);
  *certified = rep.certified_route;
  return rep.verdict;
}

bool FntExplorer::finish_phase() {
  PhaseLog entry{k_, moves_};
  ViewTree v{forest_, *view0_, depth_};
  auto cand = find_candidate(v, k_, cfg_.mode);
  if (cand) {
    entry.candidate = true;
    entry.candidate_order = cand->graph.order();
    entry.check = halting_check(cand->graph, &entry.certified);
  }
  log_.push_back(entry);
  if (cand && entry.check == Verdict::yes) {
    accepted_ = std::move(cand);
    return true;
  }
  return false;
}

Action FntExplorer::step(const Observation& obs) {
  Action a = Action::halt();
  if (!halted_) {
    if (!started_) {
      started_ = true;
      begin_phase(obs);
    } else {
      observe(obs);
    }
    while (true) {
      auto p = cfg_.acquisition == Acquisition::walk_tree ? next_move_walk_tree() : next_move_cover_ball();
      if (p) {
        ++moves_;
        a = Action::move_to(*p);
        break;
      }
      if (finish_phase()) {
        halted_ = true;
        break;
      }
      begin_phase(obs);
    }
  }
  std::uint64_t state = hash_combine(k_, moves_);
  state = hash_combine(state, cfg_.acquisition == Acquisition::walk_tree ? stack_.size()
                                                                        : (dev_ ? dev_->live_count() : 0));
  state = hash_combine(state, forest_ ? forest_->node_count() : 0);
  digest_ = hash_combine(hash_combine(digest_, obs.hash()), hash_combine(state, a.kind == Action::Kind::halt
                                                                                    ? 0xffffffffULL
                                                                                    : a.port));
  return a;
}

std::string FntExplorer::snapshot() const {
  std::ostringstream os;
  os << "k=" << k_ << " moves=" << moves_ << " halted=" << halted_;
  if (forest_) os << " forest=" << forest_->node_count() << "/" << forest_->label_count();
  if (cfg_.acquisition == Acquisition::walk_tree) {
    os << " stack=";
    for (const auto& f : stack_)
      os << "(" << f.label << "," << f.next_port << "," << (f.entry ? int(*f.entry) : -1) << ","
         << f.children.size() << ")";
  } else if (dev_) {
    os << " dev=" << dev_->live_count() << "/" << dev_->created() << " cur=" << dev_->find(cur_)
       << " route=" << route_.size() << " returning=" << returning_;
  }
  os << " phases=" << log_.size();
  return os.str();
}

ExploreOutcome explore(const PortGraph& g, Vertex v0, const ExploreOptions& opt) {
  FntExplorer agent(opt.config);
  RunOptions ro;
  ro.record = false;
  ro.on_step = opt.on_step;
  auto t = run_agent(g, v0, agent, opt.move_budget, ro);
  ExploreOutcome out;
  out.moves = t.moves;
  out.visited = t.visited;
  out.visited_count = t.visited_count();
  out.k = agent.phase();
  out.phases = agent.phases();
  if (t.halted) {
    out.verdict = ExploreOutcome::Verdict::halted;
    out.accepted = agent.accepted();
  }
  return out;
}

VertexMap reconstruct_map(const PortGraph& h, Vertex h0, const PortGraph& g, Vertex v0) {
  const std::size_t n = h.order();
  std::vector<std::vector<Port>> lam(n);
  std::vector<char> seen(n, 0);
  std::deque<Vertex> q{h0};
  seen[h0] = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (Port p = 0; p < h.degree(u); ++p) {
      Vertex w = h.neighbour(u, p);
      if (seen[w]) continue;
      seen[w] = 1;
      lam[w] = lam[u];
      lam[w].push_back(p);
      q.push_back(w);
    }
  }
  VertexMap phi(n);
  for (Vertex u = 0; u < n; ++u) phi[u] = dest(g, v0, lam[u]);
  return phi;
}

bool path_independent(const PortGraph& h, Vertex h0, const PortGraph& g, Vertex v0, std::size_t per_vertex,
                      std::size_t* paths_checked) {
  const std::size_t n = h.order();
  auto phi = reconstruct_map(h, h0, g, v0);
  std::vector<std::size_t> found(n, 0);
  std::size_t checked = 0, expansions = 0;
  const std::size_t cap = 200 * n * per_vertex;
  std::vector<char> on(n, 0);
  std::vector<Port> ports;
  bool ok = true;
  auto check = [&](Vertex u, const std::vector<Port>& lam) {
    ++checked;
    try {
      if (dest(g, v0, lam) != phi[u]) ok = false;
    } catch (const UndefinedPort&) {
      ok = false;
    }
  };
  std::function<void(Vertex)> dfs = [&](Vertex u) {
    if (!ok || expansions > cap) return;
    if (found[u] < per_vertex) {
      ++found[u];
      check(u, ports);
      if (!ports.empty()) {
        // the same path with a detour through the first neighbour
        auto detour = ports;
        Port back = h.link(u, 0).back;
        detour.push_back(0);
        detour.push_back(back);
        check(u, detour);
      }
    }
    for (Port p = 0; p < h.degree(u); ++p) {
      Vertex w = h.neighbour(u, p);
      if (on[w]) continue;
      ++expansions;
      on[w] = 1;
      ports.push_back(p);
      dfs(w);
      ports.pop_back();
      on[w] = 0;
    }
  };
  on[h0] = 1;
  dfs(h0);
  if (paths_checked) *paths_checked = checked;
  return ok;
}

LiftReport lift_report(const PortGraph& gl, const PortGraph& g, const VertexMap& f, Vertex u0,
                       const AgentFactory& agent, std::size_t steps, bool compare_snapshots) {
  if (!is_graph_covering(f, gl, g)) throw NotACovering("map is not a covering");
  const auto ll = all_labels(gl);
  const auto lb = all_labels(g);
  auto a_up = agent();
  auto a_down = agent();
  Vertex pu = u0, pd = f[u0];
  std::optional<Port> eu, ed;
  LiftReport rep;
  for (std::size_t i = 0; i < steps; ++i) {
    Observation ou{ll[pu], eu}, od{lb[pd], ed};
    Action au = a_up->step(ou);
    Action ad = a_down->step(od);
    rep.steps = i + 1;
    auto fail = [&](const std::string& why) {
      rep.ok = false;
      rep.mismatch = "step " + std::to_string(i) + ": " + why;
      return rep;
    };
    if (a_up->memory_digest() != a_down->memory_digest()) return fail("memory digests differ");
    if (compare_snapshots && a_up->snapshot() != a_down->snapshot()) return fail("snapshots differ");
    if (f[pu] != pd) return fail("position does not project");
    if (!(au == ad)) return fail("actions differ");
    if (au.kind == Action::Kind::halt) {
      rep.halted = true;
      break;
    }
    if (au.port >= gl.degree(pu)) throw InvalidMove(i, au.port, gl.degree(pu));
    const auto& lu = gl.link(pu, au.port);
    const auto& ld = g.link(pd, ad.port);
    pu = lu.to;
    eu = lu.back;
    pd = ld.to;
    ed = ld.back;
  }
  rep.ok = true;
  return rep;
}

bool lift_check(const PortGraph& gl, const PortGraph& g, const VertexMap& f, Vertex u0, const AgentFactory& agent,
                std::size_t steps) {
  return lift_report(gl, g, f, u0, agent, steps).ok;
}

}  // namespace binex
