#include "binex/views.hpp"

#include <functional>
#include <limits>
#include <map>

#include "binex/hash.hpp"

namespace binex {

DepthMismatch::DepthMismatch(std::size_t a, std::size_t b)
    : std::invalid_argument("view depths differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}

std::size_t ViewForest::KeyHash::operator()(const std::vector<std::uint32_t>& k) const {
  std::uint64_t h = k.size();
  for (auto x : k) h = hash_combine(h, x);
  return h;
}

LabelId ViewForest::intern_label(const BinocularLabel& l) {
  auto [it, fresh] = label_ids_.try_emplace(l, static_cast<LabelId>(labels_.size()));
  if (fresh) labels_.push_back(l);
  return it->second;
}

ViewNodeId ViewForest::make(LabelId label, std::vector<ViewChild> children) {
  std::vector<std::uint32_t> key;
  key.reserve(1 + 3 * children.size());
  key.push_back(label);
  std::uint32_t height = 0;
  for (const auto& c : children) {
    key.push_back(c.out);
    key.push_back(c.in);
    key.push_back(c.node);
    height = std::max(height, nodes_[c.node].height + 1);
  }
  auto [it, fresh] = node_ids_.try_emplace(std::move(key), static_cast<ViewNodeId>(nodes_.size()));
  if (fresh) nodes_.push_back(ViewNode{label, height, std::move(children)});
  return it->second;
}

ViewNodeId ViewForest::truncate(ViewNodeId id, std::size_t depth) {
  if (nodes_[id].height <= depth) return id;
  std::uint64_t key = (std::uint64_t(id) << 24) ^ depth;
  if (auto it = truncations_.find(key); it != truncations_.end()) return it->second;
  std::vector<ViewChild> kids;
  if (depth > 0) {
    // copy first: make() may reallocate nodes_
    auto src = nodes_[id].children;
    for (auto& c : src) kids.push_back({c.out, c.in, truncate(c.node, depth - 1)});
  }
  ViewNodeId out = make(nodes_[id].label, std::move(kids));
  truncations_[key] = out;
  return out;
}

std::uint64_t ViewForest::tree_size(ViewNodeId id) {
  if (auto it = sizes_.find(id); it != sizes_.end()) return it->second;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  auto kids = nodes_[id].children;
  for (auto& c : kids) {
    std::uint64_t s = tree_size(c.node);
    total = (total > kMax - s) ? kMax : total + s;
  }
  sizes_[id] = total;
  return total;
}

std::vector<ViewNodeId> all_views(const PortGraph& g, std::size_t k, ViewForest& forest,
                                  const std::vector<BinocularLabel>* labels) {
  const std::size_t n = g.order();
  std::vector<LabelId> lid(n);
  for (Vertex v = 0; v < n; ++v)
    lid[v] = forest.intern_label(labels ? (*labels)[v] : binocular_label(g, v));
  std::vector<ViewNodeId> layer(n);
  for (Vertex v = 0; v < n; ++v) layer[v] = forest.make(lid[v], {});
  for (std::size_t r = 1; r <= k; ++r) {
    std::vector<ViewNodeId> next(n);
    for (Vertex v = 0; v < n; ++v) {
      std::vector<ViewChild> kids;
      kids.reserve(g.degree(v));
      for (Port p = 0; p < g.degree(v); ++p) {
        const auto& l = g.link(v, p);
        kids.push_back({p, l.back, layer[l.to]});
      }
      next[v] = forest.make(lid[v], std::move(kids));
    }
    if (next == layer) break;  // only when no vertex has neighbours
    layer = std::move(next);
  }
  return layer;
}

ViewTree view(const PortGraph& g, Vertex v, std::size_t k, std::shared_ptr<ViewForest> forest) {
  if (!forest) forest = std::make_shared<ViewForest>();
  auto roots = all_views(g, k, *forest);
  return ViewTree{forest, roots[v], k};
}

bool view_eq(const ViewTree& a, const ViewTree& b) {
  if (a.depth != b.depth) throw DepthMismatch(a.depth, b.depth);
  if (a.forest == b.forest) return a.root == b.root;
  std::map<std::pair<ViewNodeId, ViewNodeId>, bool> memo;
  std::function<bool(ViewNodeId, ViewNodeId)> eq = [&](ViewNodeId x, ViewNodeId y) {
    if (auto it = memo.find({x, y}); it != memo.end()) return it->second;
    const auto& nx = a.forest->node(x);
    const auto& ny = b.forest->node(y);
    bool r = a.forest->label(nx.label) == b.forest->label(ny.label) &&
             nx.children.size() == ny.children.size();
    for (std::size_t i = 0; r && i < nx.children.size(); ++i) {
      const auto& cx = nx.children[i];
      const auto& cy = ny.children[i];
      r = cx.out == cy.out && cx.in == cy.in && eq(cx.node, cy.node);
    }
    memo[{x, y}] = r;
    return r;
  };
  return eq(a.root, b.root);
}

ViewTree truncate(const ViewTree& t, std::size_t k) {
  if (k > t.depth) throw DepthMismatch(t.depth, k);
  return ViewTree{t.forest, t.forest->truncate(t.root, k), k};
}

std::string serialize(const ViewTree& t) {
  std::string out;
  std::function<void(ViewNodeId)> rec = [&](ViewNodeId id) {
    const auto& nd = t.forest->node(id);
    out += "{";
    out += t.forest->label(nd.label).encode();
    for (const auto& c : nd.children) {
      out += "|" + std::to_string(c.out) + ":" + std::to_string(c.in);
      rec(c.node);
    }
    out += "}";
  };
  rec(t.root);
  return out;
}

}  // namespace binex
