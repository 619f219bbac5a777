#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "binex/graph.hpp"
#include "binex/views.hpp"

namespace binex {

// Connected port graphs on 1..n_max vertices, one per port-preserving
// isomorphism class. Order: vertex count; edge indicator vector over pairs
// (0,1),(0,2),(1,2),(0,3),... read as a binary word, first pair most
// significant; per-vertex port->neighbour permutations in lexicographic
// order, vertex 0 most significant. The first member of each class is emitted.
class GraphStream {
 public:
  explicit GraphStream(std::size_t n_max);
  std::optional<PortGraph> next();
  std::size_t emitted() const { return emitted_; }
  std::size_t scanned() const { return scanned_; }  // labelled graphs visited

 private:
  bool load_mask();      // advance to the next connected edge set
  bool advance_ports();  // next port assignment for the current edge set
  PortGraph build() const;

  std::size_t n_max_;
  std::size_t n_ = 0;
  std::uint64_t mask_ = 0;
  bool started_ = false;
  bool fresh_mask_ = false;
  std::vector<std::vector<Vertex>> perms_;
  std::set<std::vector<std::uint32_t>> seen_;
  std::size_t emitted_ = 0;
  std::size_t scanned_ = 0;
};

GraphStream enumerate_port_graphs(std::size_t n_max);

// Position of a labelled graph in the stream order (lexicographic compare).
std::vector<std::uint32_t> stream_key(const PortGraph& g);
// Relabel by `perm` (old -> new).
PortGraph relabel(const PortGraph& g, const std::vector<Vertex>& perm);
// Member of g's isomorphism class with the smallest stream key; `perm`
// receives old -> new.
PortGraph stream_representative(const PortGraph& g, std::vector<Vertex>* perm = nullptr);

struct Candidate {
  PortGraph graph;
  Vertex root;
};

struct StreamMode {
  enum class Kind { exhaustive, hinted };
  Kind kind = Kind::exhaustive;
  std::vector<PortGraph> hints;
  bool then_exhaustive = false;  // hinted: fall back to the exhaustive stream
  std::size_t literal_limit = 4;  // exhaustive: scan the literal stream up to this n_max

  static StreamMode exhaustive() { return {}; }
  static StreamMode hinted(std::vector<PortGraph> h, bool fallback = false) {
    StreamMode m;
    m.kind = Kind::hinted;
    m.hints = std::move(h);
    m.then_exhaustive = fallback;
    return m;
  }
};

// First H (stream or hint order) with |V(H)| < k and a vertex whose
// depth-2k view equals view0. Requires view0.depth == 2k.
std::optional<Candidate> find_candidate(const ViewTree& view0, std::size_t k, const StreamMode& mode);
std::optional<Candidate> find_candidate_literal(const ViewTree& view0, std::size_t k);
// Same answer as the literal scan, by view-guided construction of every
// (H, root) consistent with view0.
std::optional<Candidate> find_candidate_indexed(const ViewTree& view0, std::size_t k);
// All (H, root), H numbered by BFS from root, consistent with view0 and
// having at most n_max vertices.
std::vector<Candidate> graphs_with_view(const ViewTree& view0, std::size_t n_max);

// Hint file: one graph path per line (relative paths resolved against the
// hint file's directory), `#` comments.
std::vector<PortGraph> load_hints(const std::string& path);

}  // namespace binex
