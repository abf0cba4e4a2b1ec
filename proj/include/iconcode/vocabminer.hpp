#pragma once

#include <istream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "iconcode/raster.hpp"

namespace iconcode {

struct LabeledIcon {
  std::string icon;                 // asset reference
  std::vector<std::string> labels;  // lowercase, sorted, unique, non-empty
};

// JSON lines `{"icon": str, "labels": [str]}`. Labels are lowercased and deduplicated.
std::vector<LabeledIcon> parse_corpus_lines(std::istream& in);

// 1 - MSE / 255^2 over 64x64 grayscale thumbnails composited on white.
double visual_similarity(const Raster& a, const Raster& b);

std::size_t levenshtein(std::string_view a, std::string_view b);

// 1 - levenshtein / max length; 1 for two empty strings.
double lexical_similarity(std::string_view a, std::string_view b);

struct LabelPairGroup {
  std::string first;
  std::string second;
  double visual = 0;
  double lexical = 0;
};

// Label pairs whose representative icons (first corpus icon carrying each
// label) or spellings are at least `threshold` similar.
std::vector<LabelPairGroup> group_labels(const std::vector<LabeledIcon>& corpus, const AssetLoader& assets,
                                         double threshold = 0.9);

struct AssociationRule {
  std::string antecedent;
  std::string consequent;
  double support = 0;
  double confidence = 0;

  friend bool operator==(const AssociationRule&, const AssociationRule&) = default;
};

struct LabelGraph {
  std::set<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;  // first < second
};

struct MiningResult {
  std::vector<AssociationRule> rules;  // sorted by (antecedent, consequent)
  LabelGraph graph;
};

inline constexpr double kDefaultMinSupport = 0.001;
inline constexpr double kDefaultMinConfidence = 0.2;

// Frequent label pairs (support >= t_sup) yield t1 => t2 whenever
// support(t1, t2) / support(t1) >= t_conf, in both directions. Throws
// ValidationError for an empty corpus.
MiningResult mine_rules(const std::vector<LabeledIcon>& corpus, double t_sup = kDefaultMinSupport,
                        double t_conf = kDefaultMinConfidence);

// Connected components, largest first, then lexicographic.
std::vector<std::vector<std::string>> label_graph_components(const LabelGraph& graph);

// Keeps components whose labels together tag at least min_icons corpus icons.
std::vector<std::vector<std::string>> filter_components(const std::vector<std::vector<std::string>>& components,
                                                        const std::vector<LabeledIcon>& corpus, std::size_t min_icons);

nlohmann::json vocabulary_to_json(const MiningResult& result, const std::vector<std::vector<std::string>>& components);

}  // namespace iconcode
