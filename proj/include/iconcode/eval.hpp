#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "iconcode/artifact.hpp"
#include "iconcode/composer.hpp"

namespace iconcode {

/// Ground-truth icons of one artifact as disjoint component-id sets.
struct CompositionTruth {
  std::string artifact;
  std::vector<std::vector<int>> icons;
};

// Throws ValidationError on malformed input or overlapping icons.
CompositionTruth parse_truth(const nlohmann::json& doc);

struct EvalReport {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t predicted = 0;
  std::size_t truth = 0;
  std::size_t correct = 0;
};

double f1_score(double precision, double recall);

// A predicted cluster is correct when it matches a not-yet-matched truth icon:
// exactly by default, or with Jaccard index >= min_jaccard when that is > 0.
// Throws ValidationError when the truth has no icons.
EvalReport composition_metrics(const std::vector<std::vector<int>>& predicted, const CompositionTruth& truth,
                               double min_jaccard = 0.0);

// Micro-average: counts are pooled before P/R/F1 are computed.
EvalReport pool_reports(const std::vector<EvalReport>& reports);

nlohmann::json report_to_json(const EvalReport& report);

using IconLabel = std::pair<std::string, std::string>;  // (icon, label)

// Exact-match fraction. Throws ValidationError when the icon sets differ.
double classification_accuracy(const std::vector<IconLabel>& predictions, const std::vector<IconLabel>& truth);

// Lowercased whitespace tokens with < > = " ' / ( ) { } ; : split out.
std::vector<std::string> tokenize_code(std::string_view text);

// Uniform-weight BLEU with clipped n-gram precision and no smoothing. Orders
// above the candidate length are left out of the average.
// Throws ValidationError when either side has no tokens.
double bleu(std::string_view candidate, std::string_view reference, int n_max = 4);

struct LabeledArtifact {
  DesignArtifact artifact;
  CompositionTruth truth;
};

struct MethodScore {
  std::string method;
  EvalReport pooled;
  std::vector<EvalReport> per_artifact;
};

// Mean-Shift, DBSCAN, the three single-signal ablations and the full
// correlation, all sharing `base`'s threshold and icon policy.
std::vector<MethodScore> compare_composers(const std::vector<LabeledArtifact>& corpus, const ComposeSettings& base,
                                           double min_jaccard = 0.0);

std::string format_comparison(const std::vector<MethodScore>& scores);
nlohmann::json comparison_to_json(const std::vector<MethodScore>& scores, const std::vector<LabeledArtifact>& corpus);

}  // namespace iconcode
