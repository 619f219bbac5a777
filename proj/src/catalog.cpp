#include "binex/catalog.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <limits>
#include <optional>
#include <set>

#include "binex/cover.hpp"

namespace binex {

namespace {
constexpr Vertex kNone = std::numeric_limits<Vertex>::max();
}

PortGraph graph_from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  std::vector<std::vector<Vertex>> nb(n);
  for (auto [u, v] : edges) {
    nb[u].push_back(v);
    nb[v].push_back(u);
  }
  for (auto& l : nb) std::sort(l.begin(), l.end());
  auto port = [&](Vertex u, Vertex v) {
    return static_cast<Port>(std::lower_bound(nb[u].begin(), nb[u].end(), v) - nb[u].begin());
  };
  std::vector<EdgeRecord> rec;
  for (auto [u, v] : edges) rec.push_back({u, v, port(u, v), port(v, u)});
  return PortGraph(n, rec);
}

PortGraph make_path(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return graph_from_edges(n, e);
}

PortGraph make_complete(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.push_back({i, j});
  return graph_from_edges(n, e);
}

PortGraph make_cycle(std::size_t n) {
  std::vector<EdgeRecord> e;
  for (Vertex i = 0; i < n; ++i) e.push_back({i, static_cast<Vertex>((i + 1) % n), 0, 1});
  return PortGraph(n, e);
}

PortGraph make_grid(std::size_t rows, std::size_t cols) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      Vertex v = static_cast<Vertex>(r * cols + c);
      if (c + 1 < cols) e.push_back({v, v + 1});
      if (r + 1 < rows) e.push_back({v, static_cast<Vertex>(v + cols)});
    }
  return graph_from_edges(rows * cols, e);
}

PortGraph make_binary_tree(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 1; i < n; ++i) e.push_back({(i - 1) / 2, i});
  return graph_from_edges(n, e);
}

PortGraph make_octahedron() {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i < 6; ++i)
    for (Vertex j = i + 1; j < 6; ++j)
      if (j != (i ^ 1u)) e.push_back({i, j});
  return graph_from_edges(6, e);
}

namespace {

std::vector<std::pair<Vertex, Vertex>> face_edges(const std::vector<Face>& faces) {
  std::set<std::pair<Vertex, Vertex>> s;
  for (const auto& f : faces) {
    s.insert({f[0], f[1]});
    s.insert({f[0], f[2]});
    s.insert({f[1], f[2]});
  }
  return {s.begin(), s.end()};
}

Face face(Vertex a, Vertex b, Vertex c) {
  Face f{a, b, c};
  std::sort(f.begin(), f.end());
  return f;
}

std::vector<Face> icosahedron_faces() {
  std::vector<Face> f;
  auto up = [](Vertex i) { return 1 + i % 5; };
  auto lo = [](Vertex i) { return 6 + i % 5; };
  for (Vertex i = 0; i < 5; ++i) {
    f.push_back(face(0, up(i), up(i + 1)));
    f.push_back(face(up(i), up(i + 1), lo(i)));
    f.push_back(face(up(i + 1), lo(i), lo(i + 1)));
    f.push_back(face(11, lo(i), lo(i + 1)));
  }
  std::sort(f.begin(), f.end());
  return f;
}

// Adjacency sets of the 1-skeleton.
std::vector<std::set<Vertex>> adjacency(const Triangulation& t) {
  std::vector<std::set<Vertex>> a(t.n);
  for (auto [u, v] : face_edges(t.faces)) {
    a[u].insert(v);
    a[v].insert(u);
  }
  return a;
}

std::optional<Face> first_empty_triangle(const Triangulation& t) {
  auto a = adjacency(t);
  std::set<Face> faces(t.faces.begin(), t.faces.end());
  for (Vertex x = 0; x < t.n; ++x)
    for (Vertex y : a[x]) {
      if (y <= x) continue;
      for (Vertex z : a[y])
        if (z > y && a[x].count(z) && !faces.count(Face{x, y, z})) return Face{x, y, z};
    }
  return std::nullopt;
}

Triangulation subdivide(const Triangulation& t, Vertex a, Vertex b) {
  Triangulation s;
  s.n = t.n + 1;
  s.subdivisions = t.subdivisions + 1;
  Vertex w = static_cast<Vertex>(t.n);
  for (const auto& f : t.faces) {
    bool ha = std::count(f.begin(), f.end(), a), hb = std::count(f.begin(), f.end(), b);
    if (!(ha && hb)) {
      s.faces.push_back(f);
      continue;
    }
    Vertex c = f[0] + f[1] + f[2] - a - b;
    s.faces.push_back(face(a, w, c));
    s.faces.push_back(face(w, b, c));
  }
  std::sort(s.faces.begin(), s.faces.end());
  return s;
}

std::optional<Triangulation> deepen(const Triangulation& t, std::size_t depth) {
  auto e = first_empty_triangle(t);
  if (!e) return t;
  if (depth == 0) return std::nullopt;
  const Face& f = *e;
  const std::pair<Vertex, Vertex> choices[3] = {{f[0], f[1]}, {f[0], f[2]}, {f[1], f[2]}};
  for (auto [a, b] : choices)
    if (auto r = deepen(subdivide(t, a, b), depth - 1)) return r;
  return std::nullopt;
}

}  // namespace

PortGraph make_icosahedron() { return skeleton({12, icosahedron_faces(), 0}); }

PortGraph make_chordal6() {
  return graph_from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}, {0, 2}, {0, 3}, {0, 4}});
}

Triangulation rp2_six() {
  const int f1[10][3] = {{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 6, 2},
                         {2, 3, 5}, {3, 4, 6}, {4, 5, 2}, {5, 6, 3}, {6, 2, 4}};
  Triangulation t;
  t.n = 6;
  for (const auto& f : f1) t.faces.push_back(face(f[0] - 1, f[1] - 1, f[2] - 1));
  std::sort(t.faces.begin(), t.faces.end());
  return t;
}

Triangulation flag_rp2() {
  const auto base = rp2_six();
  for (std::size_t depth = 0; depth <= 10; ++depth)
    if (auto r = deepen(base, depth)) return *r;
  throw CatalogVerificationFailed("no flag subdivision of the 6-vertex RP2 within 10 steps");
}

PortGraph skeleton(const Triangulation& t) { return graph_from_edges(t.n, face_edges(t.faces)); }

SurfaceCheck check_surface(const Triangulation& t) {
  SurfaceCheck r;
  auto a = adjacency(t);
  std::set<Face> faces(t.faces.begin(), t.faces.end());

  r.cliques_are_faces = true;
  for (Vertex x = 0; x < t.n && r.cliques_are_faces; ++x)
    for (Vertex y = x + 1; y < t.n; ++y)
      for (Vertex z = y + 1; z < t.n; ++z)
        if (a[x].count(y) && a[x].count(z) && a[y].count(z) && !faces.count(Face{x, y, z})) {
          r.cliques_are_faces = false;
          r.detail = "empty triangle " + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z);
        }

  std::map<std::pair<Vertex, Vertex>, int> on_edge;
  for (const auto& f : t.faces) {
    ++on_edge[{f[0], f[1]}];
    ++on_edge[{f[0], f[2]}];
    ++on_edge[{f[1], f[2]}];
  }
  r.edges_in_two_faces = std::all_of(on_edge.begin(), on_edge.end(), [](auto& kv) { return kv.second == 2; });
  if (!r.edges_in_two_faces && r.detail.empty()) r.detail = "edge not on exactly two faces";

  r.links_are_cycles = true;
  for (Vertex v = 0; v < t.n; ++v) {
    std::map<Vertex, std::vector<Vertex>> link;
    for (const auto& f : t.faces) {
      if (std::find(f.begin(), f.end(), v) == f.end()) continue;
      Vertex x = kNone, y = kNone;
      for (Vertex w : f)
        if (w != v) (x == kNone ? x : y) = w;
      link[x].push_back(y);
      link[y].push_back(x);
    }
    bool ok = !link.empty() && link.size() == a[v].size();
    for (auto& [w, ns] : link) ok = ok && ns.size() == 2;
    if (ok) {
      // single cycle: walk it once around
      Vertex start = link.begin()->first, prev = start, cur = link[start][0];
      std::size_t len = 1;
      while (cur != start && len <= link.size()) {
        Vertex nx = link[cur][0] == prev ? link[cur][1] : link[cur][0];
        prev = cur;
        cur = nx;
        ++len;
      }
      ok = cur == start && len == link.size();
    }
    if (!ok) {
      r.links_are_cycles = false;
      if (r.detail.empty()) r.detail = "link of " + std::to_string(v) + " is not a cycle";
      break;
    }
  }
  return r;
}

namespace {

void verify_flag_surface(const std::string& name, const Triangulation& t) {
  auto chk = check_surface(t);
  if (!chk.ok()) throw CatalogVerificationFailed(name + ": " + chk.detail);
  PortGraph g = skeleton(t);
  CliqueComplex k(g);
  if (k.dimension() != 2 || k.count(2) != t.faces.size())
    throw CatalogVerificationFailed(name + ": clique complex differs from the triangulation");
}

}  // namespace

std::vector<CatalogEntry> catalog_build() {
  std::vector<CatalogEntry> cat;
  auto add = [&](std::string name, PortGraph g, std::string expected, std::size_t sheets, std::string note) {
    std::string file = name + ".g";
    cat.push_back({std::move(name), std::move(file), std::move(g), std::move(expected), sheets, std::move(note)});
  };
  add("p2", make_path(2), "SC", 1, "single edge");
  add("p3", make_path(3), "SC", 1, "path on three vertices");
  add("tree7", make_binary_tree(7), "SC", 1, "complete binary tree of depth 2");
  add("k3", make_cycle(3), "SC", 1, "triangle, rotationally consistent ports");
  add("k4", make_complete(4), "SC", 1, "complete graph");
  add("c4", make_cycle(4), "presumed-INF", 0, "universal cover is the infinite path");
  add("c5", make_cycle(5), "presumed-INF", 0, "universal cover is the infinite path");
  add("c6", make_cycle(6), "presumed-INF", 0, "universal cover is the infinite path");
  add("c8", make_cycle(8), "presumed-INF", 0, "universal cover is the infinite path");
  add("grid3x3", make_grid(3, 3), "presumed-INF", 0, "triangle-free with cycles");
  add("octahedron", make_octahedron(), "SC", 1, "flag 2-sphere, 6 vertices");
  add("chordal6", make_chordal6(), "SC", 1, "fan-triangulated hexagon");

  Triangulation ico{12, icosahedron_faces(), 0};
  verify_flag_surface("icosahedron", ico);
  add("icosahedron", skeleton(ico), "SC", 1, "flag 2-sphere, 12 vertices");

  Triangulation rp2 = flag_rp2();
  verify_flag_surface("rp2", rp2);
  PortGraph rp2g = skeleton(rp2);
  auto uc = universal_cover(rp2g, 0, 4 * rp2.n);
  if (uc.status != CoverStatus::finite || uc.cover.order() != 2 * rp2.n)
    throw CatalogVerificationFailed("rp2: universal cover does not have 2n vertices");
  add("rp2", rp2g, "FNT_not_SC", 2,
      "flag projective plane: " + std::to_string(rp2.subdivisions) + " edge subdivisions of the 6-vertex RP2");
  add("rp2-cover", uc.cover, "SC", 1, "universal (double) cover of rp2, a flag 2-sphere");
  return cat;
}

const CatalogEntry& catalog_entry(const std::vector<CatalogEntry>& cat, const std::string& name) {
  for (const auto& e : cat)
    if (e.name == name) return e;
  throw std::out_of_range("no catalog entry " + name);
}

std::vector<CatalogRow> catalog_run(const std::vector<CatalogEntry>& cat, std::size_t budget) {
  // one task per entry; rows keep catalog order
  std::vector<std::future<CatalogRow>> tasks;
  for (const auto& e : cat)
    tasks.push_back(std::async(std::launch::async, [&e, budget] {
      auto c = classify(e.graph, budget);
      CatalogRow r{e.name, e.expected, to_string(c.cls), c.sheets, false};
      if (e.expected == "presumed-INF")
        r.ok = c.cls == Classification::ExceedsBudget;
      else
        r.ok = r.got == e.expected && c.sheets == e.sheets;
      return r;
    }));
  std::vector<CatalogRow> rows;
  for (auto& t : tasks) rows.push_back(t.get());
  return rows;
}

void write_catalog(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto cat = catalog_build();
  auto put = [&](const std::string& file, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(fs::path(dir) / file);
    if (!out) throw std::runtime_error("cannot write " + file);
    body(out);
  };
  for (const auto& e : cat)
    put(e.file, [&](std::ostream& o) {
      o << "# " << e.name << ": " << e.note << "\n";
      write_graph(o, e.graph);
    });

  auto mod_map = [](std::size_t n, std::size_t m) {
    VertexMap f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<Vertex>(i % m);
    return f;
  };
  put("c8-to-c4.map", [&](std::ostream& o) { write_map(o, mod_map(8, 4)); });
  put("c6-to-k3.map", [&](std::ostream& o) { write_map(o, mod_map(6, 3)); });

  const auto& rp2 = catalog_entry(cat, "rp2");
  auto uc = universal_cover(rp2.graph, 0, 4 * rp2.graph.order());
  if (!(uc.cover == catalog_entry(cat, "rp2-cover").graph))
    throw CatalogVerificationFailed("rp2 cover is not reproducible");
  put("rp2-cover-to-rp2.map", [&](std::ostream& o) { write_map(o, uc.map); });

  put("octahedron.hints", [](std::ostream& o) { o << "octahedron.g\n"; });
  put("rp2.hints", [](std::ostream& o) { o << "rp2-cover.g\n"; });
}

}  // namespace binex
