#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "binex/catalog.hpp"
#include "binex/graph.hpp"

namespace binex::test {

// Connected simple graph on n vertices with about `extra` non-tree edges and
// shuffled ports.
inline PortGraph random_graph(std::mt19937& rng, std::size_t n, std::size_t extra) {
  std::set<std::pair<Vertex, Vertex>> e;
  for (Vertex v = 1; v < n; ++v) {
    Vertex u = std::uniform_int_distribution<Vertex>(0, v - 1)(rng);
    e.insert({u, v});
  }
  for (std::size_t i = 0; i < extra * 4 && e.size() < n - 1 + extra; ++i) {
    Vertex a = std::uniform_int_distribution<Vertex>(0, n - 1)(rng);
    Vertex b = std::uniform_int_distribution<Vertex>(0, n - 1)(rng);
    if (a == b) continue;
    e.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<std::vector<Vertex>> nb(n);
  for (auto [u, v] : e) {
    nb[u].push_back(v);
    nb[v].push_back(u);
  }
  for (auto& l : nb) std::shuffle(l.begin(), l.end(), rng);
  auto port = [&](Vertex u, Vertex v) {
    return static_cast<Port>(std::find(nb[u].begin(), nb[u].end(), v) - nb[u].begin());
  };
  std::vector<EdgeRecord> rec;
  for (auto [u, v] : e) rec.push_back({u, v, port(u, v), port(v, u)});
  return PortGraph(n, rec);
}

// Isomorphic copy under a random vertex permutation (ports unchanged).
inline PortGraph shuffled_copy(std::mt19937& rng, const PortGraph& g, std::vector<Vertex>* perm_out = nullptr) {
  std::vector<Vertex> perm(g.order());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<EdgeRecord> rec;
  for (const auto& e : g.edges()) rec.push_back({perm[e.u], perm[e.v], e.pu, e.pv});
  if (perm_out) *perm_out = perm;
  return PortGraph(g.order(), rec);
}

// Number of port walks of length at most L from v, by dynamic programming
// over adjacency (independent of the view code).
inline std::uint64_t walk_count(const PortGraph& g, Vertex v, std::size_t L) {
  std::vector<std::uint64_t> cur(g.order(), 0), nxt;
  cur[v] = 1;
  std::uint64_t total = 1;
  for (std::size_t s = 0; s < L; ++s) {
    nxt.assign(g.order(), 0);
    for (Vertex u = 0; u < g.order(); ++u)
      for (const auto& l : g.links(u)) nxt[l.to] += cur[u];
    cur = nxt;
    for (auto c : cur) total += c;
  }
  return total;
}

inline std::string catalog_path(const std::string& file) {
  return std::string(BINEX_SOURCE_DIR) + "/catalog/" + file;
}

}  // namespace binex::test
