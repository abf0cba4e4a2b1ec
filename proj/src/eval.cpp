#include "iconcode/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "iconcode/errors.hpp"

namespace iconcode {

CompositionTruth parse_truth(const nlohmann::json& doc) {
  CompositionTruth truth;
  try {
    truth.artifact = doc.at("artifact").get<std::string>();
    truth.icons = doc.at("icons").get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed truth file: ") + e.what());
  }
  std::set<int> seen;
  for (auto& icon : truth.icons) {
    if (icon.empty()) throw ValidationError("truth icon with no members in " + truth.artifact);
    std::sort(icon.begin(), icon.end());
    for (int id : icon) {
      if (!seen.insert(id).second) {
        throw ValidationError("component " + std::to_string(id) + " belongs to two truth icons in " + truth.artifact);
      }
    }
  }
  return truth;
}

double f1_score(double precision, double recall) {
  return precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
}

namespace {

EvalReport finish(std::size_t predicted, std::size_t truth, std::size_t correct) {
  EvalReport r;
  r.predicted = predicted;
  r.truth = truth;
  r.correct = correct;
  r.precision = predicted ? static_cast<double>(correct) / static_cast<double>(predicted) : 0.0;
  r.recall = truth ? static_cast<double>(correct) / static_cast<double>(truth) : 0.0;
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

double jaccard(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
  const std::size_t uni = a.size() + b.size() - inter.size();
  return uni ? static_cast<double>(inter.size()) / static_cast<double>(uni) : 0.0;
}

}  // namespace

EvalReport composition_metrics(const std::vector<std::vector<int>>& predicted, const CompositionTruth& truth,
                               double min_jaccard) {
  if (truth.icons.empty()) throw ValidationError("truth for " + truth.artifact + " has no icons");
  std::vector<std::vector<int>> icons = truth.icons;
  for (auto& icon : icons) std::sort(icon.begin(), icon.end());
  std::vector<bool> used(icons.size(), false);
  std::size_t correct = 0;
  for (auto cluster : predicted) {
    std::sort(cluster.begin(), cluster.end());
    std::size_t match = icons.size();
    if (min_jaccard > 0) {
      double best = min_jaccard;
      for (std::size_t t = 0; t < icons.size(); ++t) {
        const double j = used[t] ? 0.0 : jaccard(cluster, icons[t]);
        if (j >= best && (match == icons.size() || j > best)) {
          best = j;
          match = t;
        }
      }
    } else {
      for (std::size_t t = 0; t < icons.size() && match == icons.size(); ++t) {
        if (!used[t] && icons[t] == cluster) match = t;
      }
    }
    if (match != icons.size()) {
      used[match] = true;
      ++correct;
    }
  }
  return finish(predicted.size(), icons.size(), correct);
}

EvalReport pool_reports(const std::vector<EvalReport>& reports) {
  std::size_t predicted = 0, truth = 0, correct = 0;
  for (const auto& r : reports) {
    predicted += r.predicted;
    truth += r.truth;
    correct += r.correct;
  }
  return finish(predicted, truth, correct);
}

nlohmann::json report_to_json(const EvalReport& r) {
  return {{"precision", r.precision}, {"recall", r.recall},   {"f1", r.f1},
          {"predicted", r.predicted}, {"truth", r.truth}, {"correct", r.correct}};
}

double classification_accuracy(const std::vector<IconLabel>& predictions, const std::vector<IconLabel>& truth) {
  std::map<std::string, std::string> expected;
  for (const auto& [icon, label] : truth) {
    if (!expected.emplace(icon, label).second) throw ValidationError("duplicate truth entry for " + icon);
  }
  std::set<std::string> seen;
  std::size_t hits = 0;
  for (const auto& [icon, label] : predictions) {
    auto it = expected.find(icon);
    if (it == expected.end()) throw ValidationError("prediction for unknown icon " + icon);
    if (!seen.insert(icon).second) throw ValidationError("duplicate prediction for " + icon);
    hits += it->second == label ? 1 : 0;
  }
  if (seen.size() != expected.size()) throw ValidationError("predictions do not cover every truth icon");
  if (expected.empty()) throw ValidationError("no icons to score");
  return static_cast<double>(hits) / static_cast<double>(expected.size());
}

std::vector<std::string> tokenize_code(std::string_view text) {
  static constexpr std::string_view kSingles = "<>=\"'/(){};:";
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      flush();
    } else if (kSingles.find(static_cast<char>(c)) != std::string_view::npos) {
      flush();
      tokens.emplace_back(1, static_cast<char>(c));
    } else {
      cur += static_cast<char>(std::tolower(c));
    }
  }
  flush();
  return tokens;
}

double bleu(std::string_view candidate, std::string_view reference, int n_max) {
  if (n_max < 1) throw ValidationError("n_max must be at least 1");
  const auto cand = tokenize_code(candidate);
  const auto ref = tokenize_code(reference);
  if (cand.empty() || ref.empty()) throw ValidationError("BLEU needs non-empty candidate and reference");

  auto ngrams = [](const std::vector<std::string>& toks, int n) {
    std::map<std::vector<std::string>, std::size_t> counts;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= toks.size(); ++i) {
      ++counts[std::vector<std::string>(toks.begin() + static_cast<std::ptrdiff_t>(i),
                                        toks.begin() + static_cast<std::ptrdiff_t>(i) + n)];
    }
    return counts;
  };

  // A candidate shorter than n_max has no n-grams of the higher orders; those
  // orders are dropped and the weights spread over the ones that exist.
  const int orders = std::min(n_max, static_cast<int>(cand.size()));
  double log_sum = 0;
  for (int n = 1; n <= orders; ++n) {
    const auto c_counts = ngrams(cand, n);
    const auto r_counts = ngrams(ref, n);
    std::size_t clipped = 0;
    for (const auto& [gram, count] : c_counts) {
      auto it = r_counts.find(gram);
      if (it != r_counts.end()) clipped += std::min(count, it->second);
    }
    if (clipped == 0) return 0.0;
    const double total = static_cast<double>(cand.size() - static_cast<std::size_t>(n) + 1);
    log_sum += std::log(static_cast<double>(clipped) / total) / orders;
  }
  const double c = static_cast<double>(cand.size());
  const double r = static_cast<double>(ref.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum);
}

std::vector<MethodScore> compare_composers(const std::vector<LabeledArtifact>& corpus, const ComposeSettings& base,
                                           double min_jaccard) {
  struct Variant {
    const char* name;
    ComposeSettings settings;
  };
  auto with_method = [&](ClusterMethod m) {
    ComposeSettings s = base;
    s.method = m;
    return s;
  };
  auto with_weights = [&](double a, double b, double g) {
    ComposeSettings s = base;
    s.method = ClusterMethod::hac;
    s.weights = Weights(a, b, g);
    return s;
  };
  const std::vector<Variant> variants = {
      {"Mean-Shift", with_method(ClusterMethod::mean_shift)},
      {"DBSCAN", with_method(ClusterMethod::dbscan)},
      {"ATTR only", with_weights(1, 0, 0)},
      {"HRCHY only", with_weights(0, 1, 0)},
      {"IOU only", with_weights(0, 0, 1)},
      {"Ours", with_method(ClusterMethod::hac)},
  };

  std::vector<MethodScore> scores;
  for (const auto& v : variants) {
    MethodScore score;
    score.method = v.name;
    for (const auto& item : corpus) {
      const auto clusters = compose_icons(item.artifact, v.settings);
      score.per_artifact.push_back(composition_metrics(accepted_members(clusters), item.truth, min_jaccard));
    }
    score.pooled = pool_reports(score.per_artifact);
    scores.push_back(std::move(score));
  }
  return scores;
}

std::string format_comparison(const std::vector<MethodScore>& scores) {
  std::string out;
  char buf[64];
  auto row = [&](const char* label, auto field) {
    std::snprintf(buf, sizeof buf, "%-10s", label);
    out += buf;
    for (const auto& s : scores) {
      std::snprintf(buf, sizeof buf, " | %10.2f%%", 100.0 * field(s.pooled));
      out += buf;
    }
    out += '\n';
  };
  std::snprintf(buf, sizeof buf, "%-10s", "");
  out += buf;
  for (const auto& s : scores) {
    std::snprintf(buf, sizeof buf, " | %11s", s.method.c_str());
    out += buf;
  }
  out += '\n';
  row("Precision", [](const EvalReport& r) { return r.precision; });
  row("Recall", [](const EvalReport& r) { return r.recall; });
  row("F1-score", [](const EvalReport& r) { return r.f1; });
  return out;
}

nlohmann::json comparison_to_json(const std::vector<MethodScore>& scores, const std::vector<LabeledArtifact>& corpus) {
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& s : scores) {
    nlohmann::json per = nlohmann::json::array();
    for (std::size_t i = 0; i < s.per_artifact.size(); ++i) {
      auto entry = report_to_json(s.per_artifact[i]);
      entry["artifact"] = corpus[i].artifact.name;
      per.push_back(std::move(entry));
    }
    methods.push_back({{"method", s.method}, {"aggregate", report_to_json(s.pooled)}, {"artifacts", std::move(per)}});
  }
  return {{"methods", std::move(methods)}};
}

}  // namespace iconcode
