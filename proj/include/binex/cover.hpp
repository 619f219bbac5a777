#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "binex/complex.hpp"
#include "binex/graph.hpp"
#include "binex/homotopy.hpp"

namespace binex {

struct InconsistentStar : std::logic_error {
  using std::logic_error::logic_error;
};

struct KernelFault : std::logic_error {
  using std::logic_error::logic_error;
};

// Incremental development of a universal cover by star completion. Lifted
// vertices that completion proves equal are folded together.
// Used with a base graph (projections and labels known up front) or by an
// agent that learns labels only by visiting.
class StarDeveloper {
 public:
  using Id = std::uint32_t;
  static constexpr Vertex kUnknown = std::numeric_limits<Vertex>::max();

  StarDeveloper() = default;
  explicit StarDeveloper(const PortGraph& base);

  Id add_vertex(Vertex projection = kUnknown);
  Id find(Id x) const;
  bool live(Id x) const { return find(x) == x; }

  bool has_label(Id x) const { return entries_[find(x)].label >= 0; }
  const BinocularLabel& label(Id x) const { return labels_[entries_[find(x)].label]; }
  int label_index(Id x) const { return entries_[find(x)].label; }
  void set_label(Id x, const BinocularLabel& l);
  Vertex projection(Id x) const { return entries_[find(x)].proj; }

  bool complete(Id x) const { return entries_[find(x)].complete; }
  // Realize the star of x (its label must be known).
  void complete_star(Id x);

  struct Arc {
    Id to;
    Port back;
  };
  std::optional<Arc> arc(Id x, Port p) const;
  std::vector<std::pair<Port, Arc>> arcs(Id x) const;

  std::size_t live_count() const { return live_; }
  std::size_t created() const { return entries_.size(); }
  std::size_t merges() const { return merges_; }
  // Lowest live vertex that still needs completion.
  std::optional<Id> next_incomplete() const;
  std::vector<Id> live_vertices() const;
  std::vector<std::size_t> distances(Id root) const;  // SIZE_MAX when unreached

  // Live vertices renumbered by creation order. Throws InconsistentStar if
  // the folded structure is not a simple port graph.
  PortGraph extract(std::vector<Id>* order = nullptr) const;

 private:
  struct Entry {
    mutable Id parent;
    Vertex proj = kUnknown;
    int label = -1;
    bool complete = false;
    std::map<Port, Arc> arcs;
  };
  void merge(Id a, Id b);
  void connect(Id a, Port pa, Id b, Port pb);
  int intern(const BinocularLabel& l);

  const PortGraph* base_ = nullptr;
  std::vector<BinocularLabel> base_labels_;
  std::vector<int> base_label_ids_;
  std::vector<BinocularLabel> labels_;
  std::map<BinocularLabel, int> label_ids_;
  std::vector<Entry> entries_;
  std::set<Id> todo_;
  std::size_t live_ = 0;
  std::size_t merges_ = 0;
};

enum class CoverStatus { finite, budget_exceeded };

struct CoverOptions {
  static constexpr std::size_t kDefaultVerifyBudget = 128;
  std::size_t verify_budget = kDefaultVerifyBudget;  // moves per simple cycle
  bool verify = true;
  SearchOptions search{};
  CycleOptions cycles{};
};

struct CoverResult {
  CoverStatus status = CoverStatus::budget_exceeded;
  PortGraph cover;
  VertexMap map;  // cover -> base
  std::size_t sheets = 0;
  std::size_t developed = 0;  // lifted vertices created, including folded ones
  AllCyclesReport cycles;     // verification of simple connectivity
};

CoverResult universal_cover(const PortGraph& g, Vertex base, std::size_t vertex_budget,
                            const CoverOptions& opt = {});

enum class Classification { SC, FNT_not_SC, ExceedsBudget };
std::string to_string(Classification c);

struct ClassifyResult {
  Classification cls;
  std::size_t sheets = 0;
};

ClassifyResult classify(const PortGraph& g, std::size_t vertex_budget, const CoverOptions& opt = {});

// BFS over ports from `base`: n, then per discovered vertex its degree and
// (discovery index, back port) for each port.
std::vector<std::uint32_t> bfs_code(const PortGraph& g, Vertex base);
std::vector<std::uint32_t> canonical_code(const PortGraph& g);
// Port-preserving isomorphism a -> b by BFS pairing, if any.
std::optional<VertexMap> find_isomorphism(const PortGraph& a, const PortGraph& b);
// Pairing with fixed basepoints.
std::optional<VertexMap> pair_from(const PortGraph& a, Vertex a0, const PortGraph& b, Vertex b0);

}  // namespace binex
