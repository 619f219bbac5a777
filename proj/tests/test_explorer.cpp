#include <regex>
#include <sstream>

#include "binex/catalog.hpp"
#include "binex/explorer.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace binex;

namespace {

class Scripted : public AgentProgram {
 public:
  explicit Scripted(std::vector<Action> script) : script_(std::move(script)) {}
  Action step(const Observation&) override { return i_ < script_.size() ? script_[i_++] : Action::halt(); }
  std::uint64_t memory_digest() const override { return i_; }
  std::string snapshot() const override { return std::to_string(i_); }

 private:
  std::vector<Action> script_;
  std::size_t i_ = 0;
};

// Walk-tree acquisition of view(v0, 2k) walks every port walk of length <= 2k
// out and back, so phase k costs 2 (W(2k) - 1) moves.
std::size_t walk_tree_moves(const PortGraph& g, Vertex v0, std::size_t k_halt) {
  std::size_t total = 0;
  for (std::size_t k = 1; k <= k_halt; ++k) total += 2 * (test::walk_count(g, v0, 2 * k) - 1);
  return total;
}

AgentFactory fnt(ExplorerConfig cfg = {}) {
  return [cfg] { return std::make_unique<FntExplorer>(cfg); };
}

}  // namespace

TEST_CASE("trivial and scripted agents") {
  PortGraph c4 = make_cycle(4);
  Scripted halt({});
  auto t = run_agent(c4, 0, halt, 10);
  CHECK(t.length() == 0);
  CHECK(t.halted);
  Scripted walk({Action::move_to(0), Action::move_to(0), Action::move_to(1)});
  t = run_agent(c4, 0, walk, 10);
  CHECK(t.moves == 3);
  CHECK(t.final_pos == 1);
  CHECK(t.visited_count() == 3);
  Scripted bad({Action::move_to(0), Action::move_to(5)});
  try {
    run_agent(c4, 0, bad, 10);
    FAIL("expected InvalidMove");
  } catch (const InvalidMove& e) {
    CHECK(std::string(e.what()).find("port 5") != std::string::npos);
  }
  Scripted longer({Action::move_to(0), Action::move_to(0), Action::move_to(0)});
  t = run_agent(c4, 0, longer, 2);
  CHECK(t.moves == 2);
  CHECK_FALSE(t.halted);
}

TEST_CASE("halting runs on small graphs") {
  struct Golden {
    PortGraph g;
    std::size_t k;
  };
  for (const auto& [g, k] : {Golden{make_path(2), 3}, Golden{make_cycle(3), 4}, Golden{make_path(3), 4}}) {
    auto r = explore(g, 0);
    REQUIRE(r.verdict == ExploreOutcome::Verdict::halted);
    CHECK(r.k == k);
    CHECK(r.visited_count == g.order());
    CHECK(r.moves == walk_tree_moves(g, 0, k));
  }
  CHECK(explore(make_path(2), 0).moves == 24);
  CHECK(explore(make_cycle(3), 0).moves == 1344);
}

TEST_CASE("accepted candidate covers the graph") {
  for (const auto& g : {make_path(2), make_path(3), make_cycle(3), make_complete(4)})
    for (Vertex v0 = 0; v0 < g.order(); ++v0) {
      auto r = explore(g, v0);
      REQUIRE(r.verdict == ExploreOutcome::Verdict::halted);
      REQUIRE(r.accepted);
      const auto& h = r.accepted->graph;
      auto phi = reconstruct_map(h, r.accepted->root, g, v0);
      CHECK(coverings_agree(phi, h, g));
      CHECK(r.visited_count == g.order());
      std::size_t checked = 0;
      CHECK(path_independent(h, r.accepted->root, g, v0, 50, &checked));
      CHECK(checked > 0);
      CHECK(r.moves >= universal_cover(g, 0, 1000).cover.order());
    }
}

TEST_CASE("budget exhaustion is not a halt") {
  auto r = explore(make_cycle(4), 0);
  CHECK(r.verdict == ExploreOutcome::Verdict::budget_exhausted);
  CHECK(r.moves == 1'000'000);
  CHECK_FALSE(r.accepted);
  ExploreOptions small;
  small.move_budget = 20;
  CHECK(explore(make_cycle(3), 0, small).verdict == ExploreOutcome::Verdict::budget_exhausted);
}

TEST_CASE("anonymity: isomorphic copies give identical runs") {
  std::mt19937 rng(71);
  for (const auto& g : {make_cycle(3), make_path(3), make_complete(4), make_cycle(5)}) {
    std::vector<Vertex> perm;
    PortGraph h = test::shuffled_copy(rng, g, &perm);
    std::vector<TraceStep> a, b;
    ExploreOptions o;
    o.move_budget = 50'000;
    o.on_step = [&](const TraceStep& s) { a.push_back(s); };
    auto ra = explore(g, 0, o);
    o.on_step = [&](const TraceStep& s) { b.push_back(s); };
    auto rb = explore(h, perm[0], o);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].action == b[i].action);
      CHECK(a[i].digest == b[i].digest);
      CHECK(a[i].obs_hash == b[i].obs_hash);
      CHECK(perm[a[i].pos] == b[i].pos);
    }
    CHECK(ra.moves == rb.moves);
  }
}

TEST_CASE("cover-ball acquisition reaches the same phase") {
  ExplorerConfig cfg;
  cfg.acquisition = Acquisition::cover_ball;
  for (const auto& g : {make_path(2), make_cycle(3), make_complete(4), make_chordal6()}) {
    ExploreOptions wt, cb;
    cb.config = cfg;
    auto a = explore(g, 0, wt), b = explore(g, 0, cb);
    CHECK(b.verdict == ExploreOutcome::Verdict::halted);
    if (a.verdict == ExploreOutcome::Verdict::halted) CHECK(a.k == b.k);
    CHECK(b.visited_count == g.order());
  }
}

TEST_CASE("hinted runs") {
  auto cat = catalog_build();
  const auto& oct = catalog_entry(cat, "octahedron").graph;
  ExploreOptions o;
  o.config.mode = StreamMode::hinted({oct});
  o.config.acquisition = Acquisition::cover_ball;
  auto r = explore(oct, 0, o);
  REQUIRE(r.verdict == ExploreOutcome::Verdict::halted);
  CHECK(r.k == oct.order() + 1);
  CHECK(r.visited_count == 6);
  CHECK(r.moves >= 6);
}

TEST_CASE("lifting: the agent cannot tell a cover from its base") {
  PortGraph c8 = make_cycle(8), c4 = make_cycle(4);
  VertexMap f(8);
  for (Vertex i = 0; i < 8; ++i) f[i] = i % 4;
  for (Vertex u0 : {0u, 5u}) {
    auto r = lift_report(c8, c4, f, u0, fnt(), 10'000, true);
    CHECK(r.ok);
    CHECK(r.steps >= 10'000);
  }
  PortGraph c6 = make_cycle(6), k3 = make_cycle(3);
  VertexMap w(6);
  for (Vertex i = 0; i < 6; ++i) w[i] = i % 3;
  CHECK_THROWS_AS(lift_check(c6, k3, w, 0, fnt(), 10), NotACovering);
}

TEST_CASE("trace lines") {
  PortGraph p2 = make_path(2);
  std::ostringstream out;
  ExploreOptions o;
  o.on_step = [&](const TraceStep& s) { write_trace_line(out, s); };
  auto r = explore(p2, 0, o);
  std::istringstream in(out.str());
  std::string line, last;
  std::size_t n = 0;
  const std::regex shape("^([0-9]+) [0-9a-f]+ [0-9a-f]+ (M[0-9]+|H) [0-9]+$");
  while (std::getline(in, line)) {
    std::smatch m;
    REQUIRE(std::regex_match(line, m, shape));
    CHECK(std::stoul(m[1]) == n);
    last = line;
    ++n;
  }
  CHECK(n == r.moves + 1);
  CHECK(last.find(" H ") != std::string::npos);
}
