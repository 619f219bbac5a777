#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "binex/complex.hpp"
#include "binex/graph.hpp"

namespace binex {

struct CatalogVerificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builders. Ports follow ascending neighbour index unless stated.
PortGraph make_path(std::size_t n);
PortGraph make_complete(std::size_t n);
// Port 0 toward i+1, port 1 toward i-1 at every vertex.
PortGraph make_cycle(std::size_t n);
PortGraph make_grid(std::size_t rows, std::size_t cols);
PortGraph make_binary_tree(std::size_t n);
PortGraph make_octahedron();
PortGraph make_icosahedron();
PortGraph make_chordal6();
PortGraph graph_from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges);

using Face = std::array<Vertex, 3>;

struct Triangulation {
  std::size_t n = 0;
  std::vector<Face> faces;  // sorted vertex triples, sorted list
  std::size_t subdivisions = 0;
};

// The 6-vertex projective plane.
Triangulation rp2_six();
// Edge subdivisions of the 6-vertex RP2, chosen by iterative deepening, until
// every 3-clique of the 1-skeleton is a face.
Triangulation flag_rp2();
PortGraph skeleton(const Triangulation& t);

struct SurfaceCheck {
  bool cliques_are_faces = false;
  bool edges_in_two_faces = false;
  bool links_are_cycles = false;
  std::string detail;
  bool ok() const { return cliques_are_faces && edges_in_two_faces && links_are_cycles; }
};
SurfaceCheck check_surface(const Triangulation& t);

struct CatalogEntry {
  std::string name;
  std::string file;  // file name under the catalog directory
  PortGraph graph;
  std::string expected;  // SC | FNT_not_SC | presumed-INF
  std::size_t sheets = 0;
  std::string note;
};

// Throws CatalogVerificationFailed when a brute-force check fails.
std::vector<CatalogEntry> catalog_build();
const CatalogEntry& catalog_entry(const std::vector<CatalogEntry>& cat, const std::string& name);

struct CatalogRow {
  std::string name;
  std::string expected;
  std::string got;
  std::size_t sheets = 0;
  bool ok = false;
};
std::vector<CatalogRow> catalog_run(const std::vector<CatalogEntry>& cat, std::size_t budget = 500);

// Graph files, the sphere double cover of the RP2 entry with its map, the
// C8 -> C4 map, and hint lists.
void write_catalog(const std::string& dir);

}  // namespace binex
