#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "binex/graph.hpp"

namespace binex {

struct DepthMismatch : std::invalid_argument {
  DepthMismatch(std::size_t a, std::size_t b);
};

using LabelId = std::uint32_t;
using ViewNodeId = std::uint32_t;

struct ViewChild {
  Port out;  // port taken at the parent
  Port in;   // port by which the child is entered
  ViewNodeId node;
};

struct ViewNode {
  LabelId label;
  std::uint32_t height;  // 0 for leaves
  std::vector<ViewChild> children;  // in port order
};

// Hash-consed store of view trees. Identical subtrees share one node, so a
// view of depth k costs O(n k) nodes instead of O(deg^k).
class ViewForest {
 public:
  LabelId intern_label(const BinocularLabel& l);
  const BinocularLabel& label(LabelId id) const { return labels_[id]; }
  std::size_t label_count() const { return labels_.size(); }

  ViewNodeId make(LabelId label, std::vector<ViewChild> children);
  const ViewNode& node(ViewNodeId id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }

  ViewNodeId truncate(ViewNodeId id, std::size_t depth);
  // Number of nodes of the expanded tree, saturating at UINT64_MAX.
  std::uint64_t tree_size(ViewNodeId id);

 private:
  struct LabelHash {
    std::size_t operator()(const BinocularLabel& l) const { return l.hash(); }
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& k) const;
  };
  std::vector<BinocularLabel> labels_;
  std::unordered_map<BinocularLabel, LabelId, LabelHash> label_ids_;
  std::vector<ViewNode> nodes_;
  std::unordered_map<std::vector<std::uint32_t>, ViewNodeId, KeyHash> node_ids_;
  std::unordered_map<std::uint64_t, ViewNodeId> truncations_;
  std::unordered_map<ViewNodeId, std::uint64_t> sizes_;
};

struct ViewTree {
  std::shared_ptr<ViewForest> forest;
  ViewNodeId root = 0;
  std::size_t depth = 0;

  const ViewNode& root_node() const { return forest->node(root); }
  std::uint64_t node_count() const { return forest->tree_size(root); }
};

ViewTree view(const PortGraph& g, Vertex v, std::size_t k,
              std::shared_ptr<ViewForest> forest = nullptr);

// Roots of view(g, v, k) for every v, built layer by layer in one forest.
std::vector<ViewNodeId> all_views(const PortGraph& g, std::size_t k, ViewForest& forest,
                                  const std::vector<BinocularLabel>* labels = nullptr);

bool view_eq(const ViewTree& a, const ViewTree& b);
ViewTree truncate(const ViewTree& t, std::size_t k);

// Preorder nested text, children in port order:
//   {<label>|<out>:<in>{...}|<out>:<in>{...}}
std::string serialize(const ViewTree& t);

}  // namespace binex
