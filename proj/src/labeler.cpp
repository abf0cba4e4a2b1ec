#include "iconcode/labeler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "iconcode/errors.hpp"

namespace iconcode {

namespace {

void check_bins(int bins) {
  if (bins < 1 || bins > 256 || 256 % bins != 0) throw ValidationError("bin count must divide 256");
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void normalize(std::vector<double>& v) {
  const double n = norm(v);
  if (n > 0) {
    for (double& x : v) x /= n;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Nine significant digits is the model file's precision.
double round_sig9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::stod(buf);
}

}  // namespace

FeatureVector extract_histogram(const Raster& raster, int bins) {
  check_bins(bins);
  const int width = 256 / bins;
  FeatureVector fv;
  fv.values.assign(static_cast<std::size_t>(3 * bins), 0.0);
  for (const Rgba& p : raster.pixels()) {
    if (p.a == 0) continue;
    const double w = p.a / 255.0;
    fv.values[static_cast<std::size_t>(p.r / width)] += w;
    fv.values[static_cast<std::size_t>(bins + p.g / width)] += w;
    fv.values[static_cast<std::size_t>(2 * bins + p.b / width)] += w;
    fv.empty = false;
  }
  normalize(fv.values);
  return fv;
}

ClassifierModel train_centroids(const std::vector<LabeledRaster>& samples, int bins) {
  check_bins(bins);
  if (samples.empty()) throw ValidationError("no training samples");
  std::map<std::string, std::pair<std::vector<double>, int>> sums;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.label.empty()) throw ValidationError("training sample " + std::to_string(i) + " has an empty label");
    const FeatureVector fv = extract_histogram(s.raster, bins);
    if (fv.empty) {
      throw ValidationError("training sample " + std::to_string(i) + " (" + s.label + ") is fully transparent");
    }
    auto& [acc, count] = sums[s.label];
    if (acc.empty()) acc.assign(fv.values.size(), 0.0);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += fv.values[k];
    ++count;
  }

  ClassifierModel model;
  model.bins = bins;
  for (auto& [label, entry] : sums) {
    auto& [acc, count] = entry;
    for (double& x : acc) x /= count;
    normalize(acc);
    model.labels.push_back(label);
    model.centroids.push_back(std::move(acc));
    model.sample_counts.push_back(count);
  }
  return model;
}

LabelPrediction classify(const Raster& raster, const ClassifierModel& model, int k) {
  if (k < 1) throw ValidationError("k must be at least 1");
  if (model.labels.empty()) throw ValidationError("classifier model has no labels");
  const FeatureVector fv = extract_histogram(raster, model.bins);
  if (fv.empty) throw ValidationError("cannot classify a fully transparent raster");

  LabelPrediction pred;
  for (std::size_t i = 0; i < model.labels.size(); ++i) {
    const double denom = norm(model.centroids[i]);
    const double cosine = denom > 0 ? dot(fv.values, model.centroids[i]) / denom : 0.0;
    pred.ranked.emplace_back(model.labels[i], std::clamp((1.0 + cosine) / 2.0, 0.0, 1.0));
  }
  std::sort(pred.ranked.begin(), pred.ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (pred.ranked.size() > static_cast<std::size_t>(k)) pred.ranked.resize(static_cast<std::size_t>(k));
  return pred;
}

nlohmann::json model_to_json(const ClassifierModel& model) {
  nlohmann::json centroids = nlohmann::json::array();
  for (const auto& c : model.centroids) {
    nlohmann::json row = nlohmann::json::array();
    for (double x : c) row.push_back(round_sig9(x));
    centroids.push_back(std::move(row));
  }
  return {{"bins", model.bins}, {"labels", model.labels}, {"centroids", std::move(centroids)},
          {"counts", model.sample_counts}};
}

ClassifierModel model_from_json(const nlohmann::json& doc) {
  ClassifierModel model;
  try {
    model.bins = doc.at("bins").get<int>();
    model.labels = doc.at("labels").get<std::vector<std::string>>();
    model.centroids = doc.at("centroids").get<std::vector<std::vector<double>>>();
    if (doc.contains("counts")) model.sample_counts = doc.at("counts").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
  check_bins(model.bins);
  if (model.labels.size() != model.centroids.size()) throw ValidationError("model labels and centroids differ in count");
  if (std::set<std::string>(model.labels.begin(), model.labels.end()).size() != model.labels.size())
    throw ValidationError("model labels are not unique");
  for (const auto& c : model.centroids) {
    if (c.size() != static_cast<std::size_t>(3 * model.bins)) throw ValidationError("centroid has the wrong length");
  }
  if (model.sample_counts.empty()) model.sample_counts.assign(model.labels.size(), 0);
  if (model.sample_counts.size() != model.labels.size()) throw ValidationError("model counts and labels differ in count");
  return model;
}

std::map<std::string, LabelPrediction> parse_prediction_lines(std::istream& in) {
  std::map<std::string, LabelPrediction> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const double score = j.at("score").get<double>();
      if (!(score >= 0 && score <= 1)) throw ValidationError("score outside [0, 1]");
      out[j.at("icon").get<std::string>()].ranked.emplace_back(j.at("label").get<std::string>(), score);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("predictions line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("predictions line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  for (auto& [icon, pred] : out) {
    std::stable_sort(pred.ranked.begin(), pred.ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
  }
  return out;
}

}  // namespace iconcode
