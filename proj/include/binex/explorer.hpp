#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "binex/complex.hpp"
#include "binex/cover.hpp"
#include "binex/enumeration.hpp"
#include "binex/graph.hpp"
#include "binex/homotopy.hpp"
#include "binex/views.hpp"

namespace binex {

struct InvalidMove : std::runtime_error {
  InvalidMove(std::size_t step, Port port, Port degree);
};

struct NotACovering : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Everything the agent is given at a step. No vertex identity.
struct Observation {
  const BinocularLabel& label;
  std::optional<Port> entry_port;  // absent at the homebase start

  std::uint64_t hash() const;
};

struct Action {
  enum class Kind { move, halt };
  Kind kind = Kind::halt;
  Port port = 0;

  static Action move_to(Port p) { return {Kind::move, p}; }
  static Action halt() { return {Kind::halt, 0}; }
  bool operator==(const Action&) const = default;
  std::string str() const;
};

class AgentProgram {
 public:
  virtual ~AgentProgram() = default;
  virtual Action step(const Observation& obs) = 0;
  virtual std::uint64_t memory_digest() const = 0;
  virtual std::string snapshot() const = 0;  // raw state, for debugging lift checks
};

using AgentFactory = std::function<std::unique_ptr<AgentProgram>()>;

struct TraceStep {
  std::size_t index;
  std::uint64_t obs_hash;
  std::uint64_t digest;
  Action action;
  Vertex pos;  // harness-only
};

struct AgentTrace {
  std::vector<TraceStep> steps;  // empty unless recorded
  std::size_t moves = 0;
  std::size_t step_count = 0;
  bool halted = false;
  Vertex final_pos = 0;
  std::vector<char> visited;

  std::size_t length() const { return moves; }
  std::size_t visited_count() const;
};

struct RunOptions {
  bool record = true;
  std::function<void(const TraceStep&)> on_step;
};

AgentTrace run_agent(const PortGraph& g, Vertex v0, AgentProgram& agent, std::size_t move_budget,
                     const RunOptions& opt = {});

// `i <obs-hash> <mem-digest> <action> <pos>`; pos is harness metadata.
void write_trace_line(std::ostream& out, const TraceStep& s);

enum class Acquisition { walk_tree, cover_ball };
std::string to_string(Acquisition a);

struct ExplorerConfig {
  StreamMode mode = StreamMode::exhaustive();
  Acquisition acquisition = Acquisition::walk_tree;
  SearchOptions search{};
  CycleOptions cycles{};
};

struct PhaseLog {
  std::size_t k;
  std::size_t moves;  // cumulative, at the end of acquisition
  bool candidate = false;
  std::size_t candidate_order = 0;
  Verdict check = Verdict::no;
  bool certified = false;  // halting check used the chord-splitting bound
};

// The exploring agent: phases k = 1, 2, ...; acquire view(v0, 2k),
// look for H with |V(H)| < k and a vertex of equal view, halt once every
// simple cycle of H is k-contractible.
class FntExplorer : public AgentProgram {
 public:
  explicit FntExplorer(ExplorerConfig cfg);
  ~FntExplorer() override;

  Action step(const Observation& obs) override;
  std::uint64_t memory_digest() const override { return digest_; }
  std::string snapshot() const override;

  std::size_t phase() const { return k_; }
  bool halted() const { return halted_; }
  const std::optional<Candidate>& accepted() const { return accepted_; }
  const std::vector<PhaseLog>& phases() const { return log_; }

 private:
  struct Frame {
    LabelId label;
    Port next_port = 0;
    std::optional<Port> entry;
    std::vector<ViewChild> children;
  };
  struct CheckCache;

  void begin_phase(const Observation& obs);
  void observe(const Observation& obs);
  std::optional<Port> next_move_walk_tree();
  std::optional<Port> next_move_cover_ball();
  ViewNodeId cover_ball_view();
  bool finish_phase();
  Verdict halting_check(const PortGraph& h, bool* certified);

  ExplorerConfig cfg_;
  std::size_t k_ = 0;
  std::size_t depth_ = 0;
  std::size_t moves_ = 0;
  bool started_ = false;
  bool halted_ = false;
  std::uint64_t digest_ = 0;
  std::shared_ptr<ViewForest> forest_;
  std::optional<ViewNodeId> view0_;

  // walk-tree acquisition
  enum class Pending { none, descend, ascend };
  std::vector<Frame> stack_;
  Pending pending_ = Pending::none;
  ViewChild returned_{};

  // cover-ball acquisition
  std::unique_ptr<StarDeveloper> dev_;
  StarDeveloper::Id root_ = 0, cur_ = 0;
  std::vector<Port> route_;
  std::optional<Port> moved_;
  bool returning_ = false;

  std::optional<Candidate> accepted_;
  std::vector<PhaseLog> log_;
  std::map<std::vector<std::uint32_t>, std::unique_ptr<CheckCache>> checks_;
};

struct ExploreOptions {
  std::size_t move_budget = 1'000'000;
  ExplorerConfig config{};
  std::function<void(const TraceStep&)> on_step;
};

struct ExploreOutcome {
  enum class Verdict { halted, budget_exhausted };
  Verdict verdict = Verdict::budget_exhausted;
  std::size_t k = 0;
  std::size_t moves = 0;
  std::vector<char> visited;
  std::size_t visited_count = 0;
  std::optional<Candidate> accepted;
  std::vector<PhaseLog> phases;
};

ExploreOutcome explore(const PortGraph& g, Vertex v0, const ExploreOptions& opt = {});

// phi(u) = dest(g, v0, lambda(q)) for a shortest H-path q from the root to u.
VertexMap reconstruct_map(const PortGraph& h, Vertex h0, const PortGraph& g, Vertex v0);
// dest(g, v0, lambda(q)) agrees over up to `per_vertex` distinct simple
// H-paths q to each vertex (plus one backtracking detour per path).
bool path_independent(const PortGraph& h, Vertex h0, const PortGraph& g, Vertex v0, std::size_t per_vertex,
                      std::size_t* paths_checked = nullptr);

struct LiftReport {
  bool ok = false;
  std::size_t steps = 0;
  bool halted = false;
  std::string mismatch;
};

LiftReport lift_report(const PortGraph& gl, const PortGraph& g, const VertexMap& f, Vertex u0,
                       const AgentFactory& agent, std::size_t steps, bool compare_snapshots = false);
bool lift_check(const PortGraph& gl, const PortGraph& g, const VertexMap& f, Vertex u0, const AgentFactory& agent,
                std::size_t steps);

}  // namespace binex
