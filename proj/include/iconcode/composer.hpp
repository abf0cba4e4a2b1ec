#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iconcode/artifact.hpp"
#include "iconcode/raster.hpp"

namespace iconcode {

/// Weights of the attribute, hierarchy and overlap terms of the component
/// correlation. Always normalised so that alpha + beta + gamma = 1.
class Weights {
 public:
  Weights() = default;
  // Throws ValidationError on negative or all-zero weights.
  Weights(double alpha, double beta, double gamma);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

 private:
  double alpha_ = 1.0 / 3.0;
  double beta_ = 1.0 / 3.0;
  double gamma_ = 1.0 / 3.0;
};

double iou(const Rect& a, const Rect& b);

// alpha * [same kind] + beta * [same parent group] + gamma * iou(frames)
double pair_correlation(const Component& a, const Component& b, const Weights& w);

struct Merge {
  int left = 0;   // node index: < leaves.size() is a leaf, otherwise merge (index - leaves.size())
  int right = 0;
  double correlation = 0;
};

/// Merge history of an agglomerative run. Merge k creates node leaves.size() + k.
struct Dendrogram {
  std::vector<int> leaves;  // component ids
  std::vector<Merge> merges;

  // Component ids under a node, ascending.
  std::vector<int> members(int node) const;
};

// Correlations closer than this are treated as ties.
inline constexpr double kTieEpsilon = 1e-12;

// Average-linkage agglomeration on pair_correlation. Among pairs whose linkage
// is within kTieEpsilon of the maximum, the pair with the lexicographically
// smallest (min id, other min id) wins. The left child is the cluster with the
// smaller min id.
Dendrogram hac(std::span<const Component> components, const Weights& w);

// Flat clusters from merges with correlation >= threshold. Each cluster is an
// ascending id list; clusters are ordered by their smallest id.
std::vector<std::vector<int>> cut_dendrogram(const Dendrogram& d, double threshold);

struct IconPolicy {
  double max_area_ratio = 0.04;
  double min_aspect = 1.0 / 3.0;
  double max_aspect = 3.0;
  double max_coverage = 0.95;
};

struct IconCluster {
  int id = 0;
  std::vector<int> members;
  Rect bbox;
  bool accepted = false;
  std::string reason;  // empty when accepted
};

Rect bounding_box(const DesignArtifact& artifact, std::span<const int> members);

// Marks each cluster as icon or not. When `assets` is given and every member
// raster loads, the opaque coverage of the composed cluster is also checked;
// otherwise that predicate is skipped.
std::vector<IconCluster> filter_icons(const std::vector<std::vector<int>>& clusters, const DesignArtifact& artifact,
                                      const IconPolicy& policy, const AssetLoader* assets = nullptr);

// Flat-kernel mean shift over frame centres.
std::vector<std::vector<int>> mean_shift(std::span<const Component> components, double bandwidth);

struct DbscanResult {
  std::vector<std::vector<int>> clusters;
  std::vector<int> noise;
};

// DBSCAN over frame centres; a point's own position counts toward min_pts.
DbscanResult dbscan(std::span<const Component> components, double eps, int min_pts);

enum class ClusterMethod { hac, mean_shift, dbscan };

/// Everything needed to turn an artifact into icon clusters.
struct ComposeSettings {
  ClusterMethod method = ClusterMethod::hac;
  Weights weights;
  double threshold = 0.6;
  IconPolicy policy;
  double bandwidth = 40.0;  // mean shift
  double eps = 20.0;        // dbscan
  int min_pts = 2;          // dbscan
};

// Clusters the artifact's leaves with the chosen method (DBSCAN noise points
// become singletons) and runs the icon filter over the result.
std::vector<IconCluster> compose_icons(const DesignArtifact& artifact, const ComposeSettings& settings,
                                       const AssetLoader* assets = nullptr);

std::vector<std::vector<int>> accepted_members(const std::vector<IconCluster>& clusters);

nlohmann::json clusters_to_json(const std::string& artifact_name, const std::vector<IconCluster>& clusters);

}  // namespace iconcode
