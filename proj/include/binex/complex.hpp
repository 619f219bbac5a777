#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "binex/graph.hpp"

namespace binex {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotSimplicial : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EquivalenceViolation : std::logic_error {
  using std::logic_error::logic_error;
};

using Simplex = std::vector<Vertex>;  // sorted
using VertexMap = std::vector<Vertex>;

// All cliques of a graph. Holds a reference to the graph, which must outlive it.
class CliqueComplex {
 public:
  static constexpr std::size_t kDefaultBudget = 1'000'000;

  explicit CliqueComplex(const PortGraph& g, std::size_t budget = kDefaultBudget);
  CliqueComplex(PortGraph&&, std::size_t = kDefaultBudget) = delete;  // keeps a reference to g

  const PortGraph& graph() const { return *g_; }
  // Grouped by dimension, lexicographic inside a dimension.
  const std::vector<Simplex>& simplices() const { return simplices_; }
  std::size_t dimension() const { return by_dim_.size() - 1; }
  std::size_t count(std::size_t dim) const;
  std::optional<std::size_t> index(const Simplex& s) const;
  bool contains(const Simplex& s) const { return index(s).has_value(); }
  // Closed star: indices of simplices s with s + {v} a simplex.
  const std::vector<std::size_t>& star(Vertex v) const { return stars_[v]; }
  // Common neighbours w of an edge, i.e. the triangles {u, v, w}.
  std::vector<Vertex> triangles_on(Vertex u, Vertex v) const;
  const BinocularLabel& label(Vertex v) const { return labels_[v]; }

 private:
  struct SimplexHash {
    std::size_t operator()(const Simplex& s) const;
  };
  const PortGraph* g_;
  std::vector<Simplex> simplices_;
  std::vector<std::size_t> by_dim_;  // count per dimension
  std::unordered_map<Simplex, std::size_t, SimplexHash> index_;
  std::vector<std::vector<std::size_t>> stars_;
  std::vector<BinocularLabel> labels_;
};

inline CliqueComplex clique_complex(const PortGraph& g,
                                    std::size_t budget = CliqueComplex::kDefaultBudget) {
  return CliqueComplex(g, budget);
}

bool is_simplicial_map(const VertexMap& f, const CliqueComplex& src, const CliqueComplex& dst);

// Star bijection at every vertex, as simplices only.
bool is_star_covering(const VertexMap& f, const CliqueComplex& src, const CliqueComplex& dst);

// Covering of the labelled clique complex: star bijection, vertex labels
// (binocular labels) and edge labels (port pairs) preserved.
bool is_simplicial_covering(const VertexMap& f, const CliqueComplex& src, const CliqueComplex& dst);

bool is_graph_covering(const VertexMap& f, const PortGraph& src, const PortGraph& dst);

bool coverings_agree(const VertexMap& f, const PortGraph& src, const PortGraph& dst);

void dump_complex(std::ostream& out, const CliqueComplex& k);

// Map file: lines `m <src> <dst>`, `#` comments; must be total on 0..n_src-1.
VertexMap read_map(std::istream& in, std::size_t n_src, std::size_t n_dst);
VertexMap load_map(const std::string& path, std::size_t n_src, std::size_t n_dst);
void write_map(std::ostream& out, const VertexMap& f);

}  // namespace binex
