// Command-line harness. Exit status: 0 when a verdict was computed, 1 on
// usage errors, 2 on unreadable or invalid input, 3 on an internal
// consistency failure, 4 when `catalog run` disagrees with the catalog.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "binex/catalog.hpp"
#include "binex/complex.hpp"
#include "binex/cover.hpp"
#include "binex/enumeration.hpp"
#include "binex/explorer.hpp"
#include "binex/graph.hpp"
#include "binex/homotopy.hpp"

using namespace binex;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Key=value pairs for --porcelain, prose lines otherwise.
class Report {
 public:
  explicit Report(bool porcelain) : porcelain_(porcelain) {}
  template <class T>
  void kv(const std::string& k, const T& v) {
    std::ostringstream s;
    s << v;
    kv_.emplace_back(k, s.str());
  }
  void line(const std::string& l) { lines_.push_back(l); }
  void print(std::ostream& out) const {
    if (porcelain_)
      for (const auto& [k, v] : kv_) out << k << '=' << v << '\n';
    else
      for (const auto& l : lines_) out << l << '\n';
  }

 private:
  bool porcelain_;
  std::vector<std::pair<std::string, std::string>> kv_;
  std::vector<std::string> lines_;
};

PortGraph load(const std::string& path) {
  try {
    return load_graph(path);
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

VertexMap load_vertex_map(const std::string& path, const PortGraph& src, const PortGraph& dst) {
  try {
    return load_map(path, src.order(), dst.order());
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void check_vertex(const PortGraph& g, std::size_t v, const char* what) {
  if (v >= g.order()) throw InputError(std::string(what) + " " + std::to_string(v) + " is not a vertex");
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

Loop parse_loop(const std::string& text, const PortGraph& g) {
  Loop c;
  std::stringstream s(text);
  std::string tok;
  while (std::getline(s, tok, ',')) {
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      check_vertex(g, v, "loop vertex");
      c.push_back(static_cast<Vertex>(v));
    } catch (const std::logic_error&) {
      throw InputError("bad loop entry '" + tok + "'");
    }
  }
  if (c.empty()) throw InputError("empty loop");
  if (c.size() == 1 || c.back() != c.front()) c.push_back(c.front());
  if (c.size() == 2) c.pop_back();
  if (!is_loop(c, g)) throw InputError("consecutive loop vertices must be equal or adjacent");
  return c;
}

struct AgentFlags {
  std::string hints;
  std::string acquire = "auto";
  bool fallback = false;
  std::size_t state_cap = SearchOptions{}.state_cap;

  ExplorerConfig config() const {
    ExplorerConfig cfg;
    if (!hints.empty()) {
      try {
        cfg.mode = StreamMode::hinted(load_hints(hints), fallback);
      } catch (const std::exception& e) {
        throw InputError(hints + ": " + e.what());
      }
    }
    if (acquire == "walk-tree")
      cfg.acquisition = Acquisition::walk_tree;
    else if (acquire == "cover-ball")
      cfg.acquisition = Acquisition::cover_ball;
    else
      cfg.acquisition = hints.empty() ? Acquisition::walk_tree : Acquisition::cover_ball;
    cfg.search.state_cap = state_cap;
    return cfg;
  }
  void attach(CLI::App* sub) {
    sub->add_option("--hints", hints, "File listing candidate graph files, one per line");
    sub->add_flag("--fallback", fallback, "After the hints, continue with the exhaustive stream");
    sub->add_option("--acquire", acquire, "View acquisition: walk-tree, cover-ball or auto")
        ->check(CLI::IsMember({"auto", "walk-tree", "cover-ball"}));
    sub->add_option("--state-cap", state_cap, "Homotopy search state cap");
  }
};

int cmd_explore(const std::string& file, std::size_t start, std::size_t max_moves, const AgentFlags& flags,
                const std::string& trace_file, bool porcelain) {
  PortGraph g = load(file);
  check_vertex(g, start, "start");
  ExploreOptions opt;
  opt.move_budget = max_moves;
  opt.config = flags.config();
  std::ofstream trace;
  if (!trace_file.empty()) {
    trace.open(trace_file);
    if (!trace) throw InputError("cannot write " + trace_file);
    trace << "# step obs-hash mem-digest action pos; pos is harness-only, the agent never sees it\n";
    opt.on_step = [&](const TraceStep& s) { write_trace_line(trace, s); };
  }
  auto r = explore(g, static_cast<Vertex>(start), opt);
  const bool halted = r.verdict == ExploreOutcome::Verdict::halted;
  const std::string visited = std::to_string(r.visited_count) + "/" + std::to_string(g.order());

  Report rep(porcelain);
  rep.kv("verdict", halted ? "Halted" : "BudgetExhausted");
  rep.kv("budget_exhausted", halted ? 0 : 1);
  rep.kv("k", r.k);
  rep.kv("moves", r.moves);
  rep.kv("visited", r.visited_count);
  rep.kv("order", g.order());
  if (halted) {
    rep.line("Halted k=" + std::to_string(r.k) + ", visited " + visited);
    rep.line("moves: " + std::to_string(r.moves));
    if (r.accepted) {
      rep.kv("accepted_order", r.accepted->graph.order());
      rep.kv("accepted_root", r.accepted->root);
      rep.line("accepted: " + std::to_string(r.accepted->graph.order()) + "-vertex candidate, root " +
               std::to_string(r.accepted->root));
    }
  } else {
    rep.line("BudgetExhausted after " + std::to_string(r.moves) + " moves (phase k=" + std::to_string(r.k) +
             "), visited " + visited);
    rep.line("the move budget ran out; this is not a negative verdict");
  }
  rep.kv("acquisition", to_string(opt.config.acquisition));
  rep.print(std::cout);
  return 0;
}

int cmd_classify(const std::string& file, std::size_t budget, bool porcelain) {
  PortGraph g = load(file);
  auto c = classify(g, budget);
  Report rep(porcelain);
  rep.kv("verdict", to_string(c.cls));
  rep.kv("sheets", c.sheets);
  rep.kv("budget", budget);
  rep.kv("budget_exceeded", c.cls == Classification::ExceedsBudget ? 1 : 0);
  if (c.cls == Classification::ExceedsBudget)
    rep.line("ExceedsBudget: universal cover has more than " + std::to_string(budget) +
             " vertices; this is not a negative verdict");
  else
    rep.line(to_string(c.cls) + ", sheets=" + std::to_string(c.sheets));
  rep.print(std::cout);
  return 0;
}

int cmd_ucover(const std::string& file, std::size_t base, std::size_t budget, bool porcelain) {
  PortGraph g = load(file);
  check_vertex(g, base, "base");
  auto r = universal_cover(g, static_cast<Vertex>(base), budget);
  if (r.status == CoverStatus::budget_exceeded) {
    Report rep(porcelain);
    rep.kv("status", "BudgetExceeded");
    rep.kv("budget", budget);
    rep.kv("budget_exceeded", 1);
    rep.line("BudgetExceeded: more than " + std::to_string(budget) +
             " lifted vertices; this is not a negative verdict");
    rep.print(std::cout);
    return 0;
  }
  if (porcelain) {
    std::cout << "status=Finite\nbudget_exceeded=0\norder=" << r.cover.order() << "\nsheets=" << r.sheets << '\n';
  } else {
    std::cout << "# universal cover of " << file << " from base " << base << ": " << r.cover.order()
              << " vertices, " << r.sheets << " sheet(s)\n";
  }
  write_graph(std::cout, r.cover);
  for (Vertex x = 0; x < r.cover.order(); ++x) std::cout << "m " << x << ' ' << r.map[x] << '\n';
  return 0;
}

int cmd_cover_check(const std::string& src_file, const std::string& dst_file, const std::string& map_file,
                    bool porcelain) {
  PortGraph src = load(src_file), dst = load(dst_file);
  VertexMap f = load_vertex_map(map_file, src, dst);
  const bool graph_side = is_graph_covering(f, src, dst);
  CliqueComplex ks(src), kd(dst);
  bool simplicial_map = is_simplicial_map(f, ks, kd);
  bool simp_side = simplicial_map && is_simplicial_covering(f, ks, kd);
  Report rep(porcelain);
  rep.kv("graph_covering", yes_no(graph_side));
  rep.kv("simplicial_covering", yes_no(simp_side));
  rep.kv("simplicial_map", yes_no(simplicial_map));
  rep.line(std::string("graph-covering: ") + yes_no(graph_side) + "; simplicial-covering: " + yes_no(simp_side));
  if (!simplicial_map) rep.line("(the map does not send edges to edges)");
  rep.print(std::cout);
  if (graph_side != simp_side) {
    std::cerr << "EquivalenceViolation: the two covering notions disagree\n";
    return 3;
  }
  return 0;
}

int cmd_contract(const std::string& file, const std::string& loop_text, std::size_t k, std::size_t state_cap,
                 bool porcelain) {
  PortGraph g = load(file);
  Loop c = parse_loop(loop_text, g);
  CliqueComplex cx(g);
  SearchOptions opt;
  opt.state_cap = state_cap;
  auto r = contract(c, cx, k, opt);
  Report rep(porcelain);
  rep.kv("verdict", to_string(r.verdict));
  rep.kv("k", k);
  rep.kv("budget_exceeded", r.verdict == Verdict::budget_exceeded ? 1 : 0);
  rep.kv("states", r.states);
  switch (r.verdict) {
    case Verdict::yes:
      rep.kv("moves", r.certificate.size());
      rep.line("contractible within " + std::to_string(k) + " moves: yes (" + std::to_string(r.certificate.size()) +
               " moves)");
      for (const auto& m : r.certificate) rep.line("  " + to_string(m));
      break;
    case Verdict::no:
      rep.line("contractible within " + std::to_string(k) + " moves: no");
      break;
    case Verdict::budget_exceeded:
      rep.line("budget-exceeded: search stopped at the state cap " + std::to_string(state_cap) +
               "; this is not a negative verdict");
      break;
  }
  rep.print(std::cout);
  return 0;
}

int cmd_lift_check(const std::string& cover_file, const std::string& base_file, const std::string& map_file,
                   std::size_t steps, std::size_t start, const AgentFlags& flags, bool porcelain) {
  PortGraph gl = load(cover_file), g = load(base_file);
  VertexMap f = load_vertex_map(map_file, gl, g);
  check_vertex(gl, start, "start");
  const ExplorerConfig cfg = flags.config();
  AgentFactory agent = [cfg] { return std::make_unique<FntExplorer>(cfg); };
  LiftReport r;
  try {
    r = lift_report(gl, g, f, static_cast<Vertex>(start), agent, steps);
  } catch (const NotACovering& e) {
    throw InputError(std::string("not a covering: ") + e.what());
  }
  Report rep(porcelain);
  rep.kv("lift", r.ok ? "ok" : "mismatch");
  rep.kv("steps", r.steps);
  rep.kv("halted", r.halted ? 1 : 0);
  if (r.ok)
    rep.line("lift-check: ok, " + std::to_string(r.steps) + " steps agree" + (r.halted ? " (agent halted)" : ""));
  else
    rep.line("lift-check: mismatch after " + std::to_string(r.steps) + " steps: " + r.mismatch);
  rep.print(std::cout);
  return 0;
}

int cmd_enumerate(std::size_t n_max, bool print, bool porcelain) {
  auto s = enumerate_port_graphs(n_max);
  std::vector<std::size_t> per_n(n_max + 1, 0);
  std::size_t i = 0;
  while (auto g = s.next()) {
    ++per_n[g->order()];
    if (print) {
      std::cout << "# graph " << i << '\n';
      write_graph(std::cout, *g);
    }
    ++i;
  }
  Report rep(porcelain);
  rep.kv("n_max", n_max);
  rep.kv("graphs", s.emitted());
  rep.kv("labelled_scanned", s.scanned());
  std::string counts;
  for (std::size_t n = 1; n <= n_max; ++n) {
    rep.kv("n" + std::to_string(n), per_n[n]);
    counts += (n > 1 ? ", " : "") + std::to_string(n) + ":" + std::to_string(per_n[n]);
  }
  rep.line(std::to_string(s.emitted()) + " port graphs up to isomorphism with at most " + std::to_string(n_max) +
           " vertices (" + counts + ")");
  rep.print(std::cout);
  return 0;
}

int cmd_catalog_run(std::size_t budget, bool porcelain) {
  auto cat = catalog_build();
  auto rows = catalog_run(cat, budget);
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.ok;
    if (porcelain)
      std::cout << r.name << ".expected=" << r.expected << '\n'
                << r.name << ".got=" << r.got << '\n'
                << r.name << ".sheets=" << r.sheets << '\n'
                << r.name << ".ok=" << (r.ok ? 1 : 0) << '\n';
    else
      std::cout << r.name << ": expected " << r.expected << ", got " << r.got << ", sheets=" << r.sheets
                << (r.ok ? "  ok" : "  MISMATCH") << '\n';
  }
  if (porcelain)
    std::cout << "all_ok=" << (all ? 1 : 0) << '\n';
  else
    std::cout << (all ? "catalog reproduced" : "catalog NOT reproduced") << '\n';
  return all ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exploration of anonymous port graphs with binocular views"};
  app.require_subcommand(1);
  bool porcelain = false;
  app.add_flag("--porcelain", porcelain, "Machine-readable key=value output");
  std::function<int()> run;

  std::string file, file2, file3, trace_file, loop_text;
  std::size_t start = 0, max_moves = 1'000'000, budget = 500, base = 0, k = 0, steps = 10'000, n_max = 3;
  std::size_t state_cap = SearchOptions{}.state_cap;
  bool print = false;
  AgentFlags flags;

  auto* ex = app.add_subcommand("explore", "Run the exploring agent from a start vertex");
  ex->add_option("graph", file)->required();
  ex->add_option("--start", start);
  ex->add_option("--max-moves", max_moves);
  ex->add_option("--trace", trace_file, "Write one trace line per step");
  flags.attach(ex);
  ex->callback([&] { run = [&] { return cmd_explore(file, start, max_moves, flags, trace_file, porcelain); }; });

  auto* cl = app.add_subcommand("classify", "SC, FNT_not_SC or ExceedsBudget");
  cl->add_option("graph", file)->required();
  cl->add_option("--budget", budget);
  cl->callback([&] { run = [&] { return cmd_classify(file, budget, porcelain); }; });

  auto* uc = app.add_subcommand("ucover", "Print the universal cover and its covering map");
  uc->add_option("graph", file)->required();
  uc->add_option("--base", base);
  uc->add_option("--budget", budget);
  uc->callback([&] { run = [&] { return cmd_ucover(file, base, budget, porcelain); }; });

  auto* cc = app.add_subcommand("cover-check", "Check a vertex map as graph and simplicial covering");
  cc->add_option("src", file)->required();
  cc->add_option("dst", file2)->required();
  cc->add_option("map", file3)->required();
  cc->callback([&] { run = [&] { return cmd_cover_check(file, file2, file3, porcelain); }; });

  auto* ct = app.add_subcommand("contract", "Decide k-contractibility of a loop");
  ct->add_option("graph", file)->required();
  ct->add_option("--loop", loop_text, "Comma-separated vertices")->required();
  ct->add_option("--k", k)->required();
  ct->add_option("--state-cap", state_cap);
  ct->callback([&] { run = [&] { return cmd_contract(file, loop_text, k, state_cap, porcelain); }; });

  auto* lc = app.add_subcommand("lift-check", "Run the agent on a cover and on its base in lockstep");
  lc->add_option("cover", file)->required();
  lc->add_option("base", file2)->required();
  lc->add_option("map", file3)->required();
  lc->add_option("--steps", steps);
  lc->add_option("--start", start, "Start vertex in the cover");
  flags.attach(lc);
  lc->callback([&] { run = [&] { return cmd_lift_check(file, file2, file3, steps, start, flags, porcelain); }; });

  auto* en = app.add_subcommand("enumerate", "Canonical port graphs in stream order");
  en->add_option("--n-max", n_max)->required()->check(CLI::Range(1, 6));
  en->add_flag("--print", print, "Print every graph");
  en->callback([&] { run = [&] { return cmd_enumerate(n_max, print, porcelain); }; });

  auto* cat = app.add_subcommand("catalog", "Catalog of reference graphs");
  cat->require_subcommand(1);
  auto* cr = cat->add_subcommand("run", "Rebuild the catalog and reproduce its classifications");
  cr->add_option("--budget", budget);
  cr->callback([&] { run = [&] { return cmd_catalog_run(budget, porcelain); }; });
  auto* cw = cat->add_subcommand("write", "Write graph, map and hint files");
  cw->add_option("dir", file)->required();
  cw->callback([&] {
    run = [&] {
      write_catalog(file);
      std::cout << "catalog written to " << file << '\n';
      return 0;
    };
  });

  for (auto* s : app.get_subcommands({})) s->fallthrough();
  cat->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  try {
    return run();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidGraph& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const CatalogVerificationFailed& e) {
    std::cerr << "CatalogVerificationFailed: " << e.what() << '\n';
    return 3;
  } catch (const KernelFault& e) {
    std::cerr << "KernelFault: " << e.what() << '\n';
    return 3;
  } catch (const EquivalenceViolation& e) {
    std::cerr << "EquivalenceViolation: " << e.what() << '\n';
    return 3;
  }
}
