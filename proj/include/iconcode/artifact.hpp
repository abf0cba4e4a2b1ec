#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace iconcode {

/// Axis-aligned box in absolute artifact pixels. w and h are never negative.
struct Rect {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Smallest box enclosing both. An empty box is absorbed only when it is the
// default-constructed accumulator (see bounding_box).
Rect union_rect(const Rect& a, const Rect& b);

enum class NodeKind { group, bitmap, shape, text };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view name);

/// One layer of a design artifact. Leaves (bitmap, shape, text) are the
/// components that get clustered; groups only carry structure.
///
/// Nodes live in a flat pre-order vector owned by DesignArtifact, so `id` is also
/// the node's index there and its z-order position. `parent` is -1 for the root.
struct Node {
  int id = 0;
  int parent = -1;
  std::string name;
  NodeKind kind = NodeKind::group;
  Rect frame;
  std::optional<std::string> text;
  std::optional<std::string> image;
  std::vector<int> children;

  bool is_leaf() const { return kind != NodeKind::group; }

  friend bool operator==(const Node&, const Node&) = default;
};

using Component = Node;

struct DesignArtifact {
  std::string name;
  int width = 0;
  int height = 0;
  std::vector<Node> nodes;  // pre-order; nodes[0] is the root group

  const Node& root() const { return nodes.front(); }
  const Node& node(int id) const { return nodes.at(static_cast<std::size_t>(id)); }

  friend bool operator==(const DesignArtifact&, const DesignArtifact&) = default;
};

// Parses and validates the JSON artifact format. Frames that spill over the
// canvas are clamped to it. Throws ValidationError naming the offending node path.
DesignArtifact parse_artifact(std::string_view text);
DesignArtifact parse_artifact(const nlohmann::json& doc);

nlohmann::json artifact_to_json(const DesignArtifact& artifact);

// All non-group nodes in document order.
std::vector<Component> leaf_components(const DesignArtifact& artifact);

}  // namespace iconcode
