#pragma once

#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "iconcode/raster.hpp"

namespace iconcode {

inline constexpr int kDefaultBins = 16;

/// Alpha-weighted per-channel colour histogram, R bins then G then B,
/// L2-normalised. `empty` marks a raster without any non-transparent pixel.
struct FeatureVector {
  std::vector<double> values;
  bool empty = true;
};

FeatureVector extract_histogram(const Raster& raster, int bins = kDefaultBins);

struct ClassifierModel {
  int bins = kDefaultBins;
  std::vector<std::string> labels;             // sorted, unique
  std::vector<std::vector<double>> centroids;  // parallel to labels
  std::vector<int> sample_counts;              // parallel to labels
};

struct LabeledRaster {
  Raster raster;
  std::string label;
};

ClassifierModel train_centroids(const std::vector<LabeledRaster>& samples, int bins = kDefaultBins);

/// Labels with scores in [0, 1], best first.
struct LabelPrediction {
  std::vector<std::pair<std::string, double>> ranked;

  const std::string& top() const { return ranked.front().first; }
};

// score = (1 + cosine(feature, centroid)) / 2, top k, ties by label.
LabelPrediction classify(const Raster& raster, const ClassifierModel& model, int k);

nlohmann::json model_to_json(const ClassifierModel& model);
ClassifierModel model_from_json(const nlohmann::json& doc);

// Reads `{"icon": ..., "label": ..., "score": ...}` lines produced by an
// external classifier. Several lines for one icon build a ranked list.
std::map<std::string, LabelPrediction> parse_prediction_lines(std::istream& in);

}  // namespace iconcode
