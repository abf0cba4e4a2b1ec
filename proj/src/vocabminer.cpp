#include "iconcode/vocabminer.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <tuple>

#include "iconcode/errors.hpp"

namespace iconcode {

std::vector<LabeledIcon> parse_corpus_lines(std::istream& in) {
  std::vector<LabeledIcon> corpus;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    LabeledIcon icon;
    try {
      const auto j = nlohmann::json::parse(line);
      icon.icon = j.at("icon").get<std::string>();
      for (auto label : j.at("labels").get<std::vector<std::string>>()) {
        std::transform(label.begin(), label.end(), label.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (!label.empty()) icon.labels.push_back(std::move(label));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
    std::sort(icon.labels.begin(), icon.labels.end());
    icon.labels.erase(std::unique(icon.labels.begin(), icon.labels.end()), icon.labels.end());
    if (icon.labels.empty()) throw ValidationError("corpus line " + std::to_string(line_no) + ": no labels");
    corpus.push_back(std::move(icon));
  }
  return corpus;
}

namespace {

constexpr int kThumb = 64;

std::vector<double> gray_thumbnail(const Raster& raster) {
  const Raster small = resize_nearest(raster, kThumb, kThumb);
  std::vector<double> out;
  out.reserve(kThumb * kThumb);
  for (const Rgba& p : small.pixels()) {
    const double a = p.a / 255.0;
    const double r = p.r * a + 255.0 * (1 - a);
    const double g = p.g * a + 255.0 * (1 - a);
    const double b = p.b * a + 255.0 * (1 - a);
    out.push_back((r + g + b) / 3.0);
  }
  return out;
}

double thumbnail_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  double sse = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sse += (a[i] - b[i]) * (a[i] - b[i]);
  const double mse = sse / static_cast<double>(a.size());
  return std::clamp(1.0 - mse / (255.0 * 255.0), 0.0, 1.0);
}

}  // namespace

double visual_similarity(const Raster& a, const Raster& b) {
  return thumbnail_similarity(gray_thumbnail(a), gray_thumbnail(b));
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double lexical_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

std::vector<LabelPairGroup> group_labels(const std::vector<LabeledIcon>& corpus, const AssetLoader& assets,
                                         double threshold) {
  std::map<std::string, std::string> representative;
  for (const auto& icon : corpus) {
    for (const auto& label : icon.labels) representative.emplace(label, icon.icon);
  }
  std::map<std::string, std::vector<double>> thumbs;
  for (const auto& [label, ref] : representative) {
    if (!thumbs.contains(ref)) thumbs.emplace(ref, gray_thumbnail(assets(ref)));
  }

  std::vector<LabelPairGroup> groups;
  for (auto a = representative.begin(); a != representative.end(); ++a) {
    for (auto b = std::next(a); b != representative.end(); ++b) {
      LabelPairGroup g{a->first, b->first, 0, 0};
      g.lexical = lexical_similarity(a->first, b->first);
      g.visual = a->second == b->second ? 1.0 : thumbnail_similarity(thumbs.at(a->second), thumbs.at(b->second));
      if (g.visual >= threshold || g.lexical >= threshold) groups.push_back(std::move(g));
    }
  }
  return groups;
}

MiningResult mine_rules(const std::vector<LabeledIcon>& corpus, double t_sup, double t_conf) {
  if (corpus.empty()) throw ValidationError("cannot mine rules from an empty corpus");
  const double total = static_cast<double>(corpus.size());
  std::map<std::string, std::size_t> single;
  std::map<std::pair<std::string, std::string>, std::size_t> pairs;
  for (const auto& icon : corpus) {
    for (std::size_t i = 0; i < icon.labels.size(); ++i) {
      ++single[icon.labels[i]];
      for (std::size_t j = i + 1; j < icon.labels.size(); ++j) ++pairs[{icon.labels[i], icon.labels[j]}];
    }
  }

  MiningResult result;
  auto consider = [&](const std::string& from, const std::string& to, std::size_t both) {
    const double support = static_cast<double>(both) / total;
    const double confidence = support / (static_cast<double>(single.at(from)) / total);
    if (confidence >= t_conf) result.rules.push_back({from, to, support, confidence});
  };
  for (const auto& [pair, count] : pairs) {
    if (static_cast<double>(count) / total < t_sup) continue;
    consider(pair.first, pair.second, count);
    consider(pair.second, pair.first, count);
  }
  std::sort(result.rules.begin(), result.rules.end(), [](const auto& a, const auto& b) {
    return std::tie(a.antecedent, a.consequent) < std::tie(b.antecedent, b.consequent);
  });
  for (const auto& r : result.rules) {
    result.graph.nodes.insert(r.antecedent);
    result.graph.nodes.insert(r.consequent);
    result.graph.edges.insert(std::pair<std::string, std::string>(std::minmax(r.antecedent, r.consequent)));
  }
  return result;
}

std::vector<std::vector<std::string>> label_graph_components(const LabelGraph& graph) {
  std::map<std::string, std::string> parent;
  for (const auto& n : graph.nodes) parent[n] = n;
  auto find = [&](std::string x) {
    while (parent.at(x) != x) x = parent.at(x);
    return x;
  };
  for (const auto& [a, b] : graph.edges) {
    parent.try_emplace(a, a);
    parent.try_emplace(b, b);
    const std::string ra = find(a);
    const std::string rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& [node, unused] : parent) groups[find(node)].push_back(node);

  std::vector<std::vector<std::string>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  return out;
}

std::vector<std::vector<std::string>> filter_components(const std::vector<std::vector<std::string>>& components,
                                                        const std::vector<LabeledIcon>& corpus, std::size_t min_icons) {
  std::vector<std::vector<std::string>> out;
  for (const auto& comp : components) {
    const std::set<std::string> members(comp.begin(), comp.end());
    const auto tagged = std::count_if(corpus.begin(), corpus.end(), [&](const LabeledIcon& icon) {
      return std::any_of(icon.labels.begin(), icon.labels.end(), [&](const auto& l) { return members.contains(l); });
    });
    if (static_cast<std::size_t>(tagged) >= min_icons) out.push_back(comp);
  }
  return out;
}

nlohmann::json vocabulary_to_json(const MiningResult& result, const std::vector<std::vector<std::string>>& components) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : result.rules) {
    rules.push_back({{"t1", r.antecedent}, {"t2", r.consequent}, {"support", r.support}, {"confidence", r.confidence}});
  }
  return {{"rules", std::move(rules)}, {"components", components}};
}

}  // namespace iconcode
