#include "iconcode/artifact.hpp"

#include <algorithm>

#include "iconcode/errors.hpp"

namespace iconcode {

using nlohmann::json;

Rect union_rect(const Rect& a, const Rect& b) {
  const double x0 = std::min(a.x, b.x);
  const double y0 = std::min(a.y, b.y);
  const double x1 = std::max(a.right(), b.right());
  const double y1 = std::max(a.bottom(), b.bottom());
  return {x0, y0, x1 - x0, y1 - y0};
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::group: return "group";
    case NodeKind::bitmap: return "bitmap";
    case NodeKind::shape: return "shape";
    case NodeKind::text: return "text";
  }
  return "group";
}

std::optional<NodeKind> parse_node_kind(std::string_view name) {
  if (name == "group") return NodeKind::group;
  if (name == "bitmap") return NodeKind::bitmap;
  if (name == "shape") return NodeKind::shape;
  if (name == "text") return NodeKind::text;
  return std::nullopt;
}

namespace {

class Parser {
 public:
  explicit Parser(DesignArtifact& out) : out_(out) {}

  void parse_node(const json& j, int parent, const std::string& path) {
    if (!j.is_object()) fail(path, "node must be an object");

    Node node;
    node.id = static_cast<int>(out_.nodes.size());
    node.parent = parent;
    node.name = string_field(j, "name", path);
    const std::string where = path + " (\"" + node.name + "\")";

    const std::string kind_name = string_field(j, "kind", where);
    auto kind = parse_node_kind(kind_name);
    if (!kind) fail(where, "unknown kind \"" + kind_name + "\"");
    node.kind = *kind;
    node.frame = parse_frame(j, where);

    if (j.contains("text")) {
      if (node.kind != NodeKind::text) fail(where, "only text nodes may carry text");
      node.text = string_field(j, "text", where);
    }
    if (j.contains("image")) {
      if (node.kind == NodeKind::group) fail(where, "group node cannot carry an image");
      if (node.kind == NodeKind::text) fail(where, "text node cannot carry an image");
      node.image = string_field(j, "image", where);
    }

    const json* children = nullptr;
    if (j.contains("children")) {
      children = &j.at("children");
      if (!children->is_array()) fail(where, "children must be an array");
      if (node.kind != NodeKind::group && !children->empty()) fail(where, "leaf node cannot have children");
    }

    const int id = node.id;
    out_.nodes.push_back(std::move(node));
    if (parent >= 0) out_.nodes[static_cast<std::size_t>(parent)].children.push_back(id);

    if (children && out_.nodes[static_cast<std::size_t>(id)].kind == NodeKind::group) {
      for (std::size_t i = 0; i < children->size(); ++i) {
        parse_node((*children)[i], id, path + "/children[" + std::to_string(i) + "]");
      }
    }
  }

 private:
  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ValidationError(where + ": " + what);
  }

  static std::string string_field(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing \"") + key + "\"");
    if (!it->is_string()) fail(where, std::string("\"") + key + "\" must be a string");
    return it->get<std::string>();
  }

  static double number_field(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("frame missing \"") + key + "\"");
    if (!it->is_number()) fail(where, std::string("frame \"") + key + "\" must be a number");
    return it->get<double>();
  }

  Rect parse_frame(const json& j, const std::string& where) const {
    auto it = j.find("frame");
    if (it == j.end() || !it->is_object()) fail(where, "missing frame object");
    Rect r{number_field(*it, "x", where), number_field(*it, "y", where), number_field(*it, "w", where),
           number_field(*it, "h", where)};
    if (r.w < 0) fail(where, "negative frame width " + json(r.w).dump());
    if (r.h < 0) fail(where, "negative frame height " + json(r.h).dump());
    return clamp(r);
  }

  Rect clamp(const Rect& r) const {
    const double cw = out_.width;
    const double ch = out_.height;
    const double x0 = std::clamp(r.x, 0.0, cw);
    const double y0 = std::clamp(r.y, 0.0, ch);
    const double x1 = std::clamp(r.right(), 0.0, cw);
    const double y1 = std::clamp(r.bottom(), 0.0, ch);
    return {x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0)};
  }

  DesignArtifact& out_;
};

int positive_int(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_number()) throw ValidationError(std::string("artifact: missing numeric \"") + key + "\"");
  const double v = it->get<double>();
  if (v <= 0 || v != static_cast<double>(static_cast<long long>(v)))
    throw ValidationError(std::string("artifact: \"") + key + "\" must be a positive integer");
  return static_cast<int>(v);
}

json frame_json(const Rect& r) { return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }

json node_json(const DesignArtifact& a, const Node& n) {
  json j = {{"name", n.name}, {"kind", std::string(to_string(n.kind))}, {"frame", frame_json(n.frame)}};
  if (n.text) j["text"] = *n.text;
  if (n.image) j["image"] = *n.image;
  if (n.kind == NodeKind::group) {
    json kids = json::array();
    for (int c : n.children) kids.push_back(node_json(a, a.node(c)));
    j["children"] = std::move(kids);
  }
  return j;
}

}  // namespace

DesignArtifact parse_artifact(const json& doc) {
  if (!doc.is_object()) throw ValidationError("artifact: document must be a JSON object");
  DesignArtifact artifact;
  auto name = doc.find("name");
  if (name == doc.end() || !name->is_string()) throw ValidationError("artifact: missing string \"name\"");
  artifact.name = name->get<std::string>();
  artifact.width = positive_int(doc, "width");
  artifact.height = positive_int(doc, "height");

  auto root = doc.find("root");
  if (root == doc.end()) throw ValidationError("artifact: missing \"root\"");
  Parser(artifact).parse_node(*root, -1, "root");
  if (artifact.root().kind != NodeKind::group) throw ValidationError("root: root node must be a group");
  return artifact;
}

DesignArtifact parse_artifact(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("artifact: malformed JSON: ") + e.what());
  }
  return parse_artifact(doc);
}

json artifact_to_json(const DesignArtifact& artifact) {
  return {{"name", artifact.name},
          {"width", artifact.width},
          {"height", artifact.height},
          {"root", node_json(artifact, artifact.root())}};
}

std::vector<Component> leaf_components(const DesignArtifact& artifact) {
  std::vector<Component> leaves;
  for (const auto& n : artifact.nodes) {
    if (n.is_leaf()) leaves.push_back(n);
  }
  return leaves;
}

}  // namespace iconcode
