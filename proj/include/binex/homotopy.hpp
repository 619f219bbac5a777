#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "binex/complex.hpp"
#include "binex/graph.hpp"

namespace binex {

// Closed walk (v0, ..., vL) with vL == v0; a single vertex is the trivial loop.
using Loop = std::vector<Vertex>;

struct SearchBudgetExceeded : std::runtime_error {
  explicit SearchBudgetExceeded(std::size_t states);
  std::size_t states;
};

enum class MoveKind { insert_backtrack, delete_backtrack, push_across, merge_stationary };

// Replaces the subpath q = c[position .. position+span] by `replacement`
// (endpoints included, same endpoints as q).
struct HomotopyMove {
  MoveKind kind;
  std::size_t position;
  std::size_t span;
  std::vector<Vertex> replacement;

  bool operator==(const HomotopyMove&) const = default;
};

std::string to_string(MoveKind k);
std::string to_string(const HomotopyMove& m);

// Throws std::invalid_argument if the move is not an elementary homotopy of c.
Loop apply_move(const Loop& c, const HomotopyMove& m, const CliqueComplex& k);
Loop replay(const Loop& c, const std::vector<HomotopyMove>& moves, const CliqueComplex& k);

bool is_loop(const Loop& c, const PortGraph& g);

std::vector<HomotopyMove> elementary_moves(const Loop& c, const CliqueComplex& k);
std::vector<Loop> homotopy_neighbors(const Loop& c, const CliqueComplex& k);  // sorted, unique

struct SearchOptions {
  static constexpr std::size_t kDefaultStateCap = 1'000'000;
  std::size_t state_cap = kDefaultStateCap;
  bool use_witnesses = true;       // try certificate producers before exact search
  std::size_t greedy_cap = 2'000;  // expansions for the greedy producer
};

enum class Verdict { yes, no, budget_exceeded };
std::string to_string(Verdict v);

struct ContractResult {
  Verdict verdict = Verdict::no;
  std::vector<HomotopyMove> certificate;  // on yes, replayed to the trivial loop
  std::size_t states = 0;                 // exact-search states visited
};

ContractResult contract(const Loop& c, const CliqueComplex& k, std::size_t budget,
                        const SearchOptions& opt = {});
// Throws SearchBudgetExceeded when the state cap is hit before the answer is known.
bool is_k_contractible(const Loop& c, const CliqueComplex& k, std::size_t budget,
                       const SearchOptions& opt = {});

// Certificate from disk shelling, for a simple cycle bounding a disk of
// triangles in a surface-like region; nullopt when none is found.
std::optional<std::vector<HomotopyMove>> shelling_certificate(const Loop& c, const CliqueComplex& k);

struct CycleOptions {
  static constexpr std::size_t kDefaultCap = 100'000;
  std::size_t cycle_cap = kDefaultCap;
  std::size_t step_cap = 50'000'000;  // DFS extensions
};

// Each simple cycle (length >= 3) once, as the lexicographically smallest
// closed vertex sequence over rotations and reversals; sorted.
// Throws BudgetExceeded when a cap is hit.
std::vector<Loop> simple_cycles(const PortGraph& g, const CycleOptions& opt = {});
std::vector<Loop> chordless_cycles(const PortGraph& g, const CycleOptions& opt = {});

struct AllCyclesReport {
  Verdict verdict = Verdict::no;
  bool certified_route = false;  // chord-splitting bound instead of enumeration
  std::size_t cycles = 0;        // cycles examined (enumeration route)
  std::optional<Loop> witness;   // first cycle not established / not contractible
  std::size_t bound = 0;         // bound on moves per simple cycle, when known
};

// Per-complex cache so repeated queries with growing k reuse the work.
class CycleContractibility {
 public:
  CycleContractibility(const PortGraph& g, SearchOptions search = {}, CycleOptions cycles = {});
  AllCyclesReport query(std::size_t k);

 private:
  void prepare();
  void prepare_certified();

  const PortGraph* g_;
  CliqueComplex cx_;
  SearchOptions search_;
  CycleOptions cycle_opt_;
  bool prepared_ = false;
  bool literal_ = true;
  std::vector<Loop> cycles_;
  std::vector<std::size_t> best_;      // shortest certificate found, or SIZE_MAX
  std::vector<std::size_t> refuted_;   // proved not contractible within this budget
  std::optional<std::size_t> certified_bound_;
  std::optional<Loop> certified_gap_;
};

AllCyclesReport all_simple_cycles_report(const PortGraph& g, std::size_t k,
                                         const SearchOptions& search = {},
                                         const CycleOptions& cycles = {});
// Throws SearchBudgetExceeded if the conjunction is not established either way.
bool all_simple_cycles_k_contractible(const PortGraph& g, std::size_t k,
                                      const SearchOptions& search = {},
                                      const CycleOptions& cycles = {});

// Based variants of a cycle: every rotation in both directions.
std::vector<Loop> based_variants(const Loop& c);

// Chord-splitting bound: B[L] bounds moves for any simple cycle of length L,
// given per-length bounds for chordless cycles (index = length).
std::vector<std::size_t> chord_split_bounds(const std::vector<std::size_t>& chordless, std::size_t max_len);

}  // namespace binex
