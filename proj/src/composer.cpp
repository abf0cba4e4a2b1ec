#include "iconcode/composer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <tuple>

#include "iconcode/errors.hpp"
#include "iconcode/tracer.hpp"

namespace iconcode {

Weights::Weights(double alpha, double beta, double gamma) {
  if (!(alpha >= 0 && beta >= 0 && gamma >= 0)) throw ValidationError("weights must be non-negative");
  const double total = alpha + beta + gamma;
  if (!(total > 0) || !std::isfinite(total)) throw ValidationError("weights must have a positive finite sum");
  alpha_ = alpha / total;
  beta_ = beta / total;
  gamma_ = gamma / total;
}

double iou(const Rect& a, const Rect& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  const double inter = (iw > 0 && ih > 0) ? iw * ih : 0.0;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double pair_correlation(const Component& a, const Component& b, const Weights& w) {
  const double attr = a.kind == b.kind ? 1.0 : 0.0;
  const double hrchy = a.parent == b.parent ? 1.0 : 0.0;
  // A component always overlaps itself, even when its frame is degenerate.
  const double overlap = a.id == b.id ? 1.0 : iou(a.frame, b.frame);
  return w.alpha() * attr + w.beta() * hrchy + w.gamma() * overlap;
}

std::vector<int> Dendrogram::members(int node) const {
  std::vector<int> out;
  std::vector<int> stack{node};
  const int n = static_cast<int>(leaves.size());
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    if (cur < n) {
      out.push_back(leaves[static_cast<std::size_t>(cur)]);
    } else {
      const Merge& m = merges.at(static_cast<std::size_t>(cur - n));
      stack.push_back(m.left);
      stack.push_back(m.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Dendrogram hac(std::span<const Component> components, const Weights& w) {
  Dendrogram d;
  const std::size_t n = components.size();
  for (const auto& c : components) d.leaves.push_back(c.id);
  if (n < 2) return d;

  // sums[i * n + j]: total pair correlation between the clusters in slots i and j.
  std::vector<double> sums(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = pair_correlation(components[i], components[j], w);
      sums[i * n + j] = c;
      sums[j * n + i] = c;
    }
  }

  struct Slot {
    int node;
    double size;
    int min_id;
  };
  std::vector<Slot> slots(n);
  for (std::size_t i = 0; i < n; ++i) slots[i] = {static_cast<int>(i), 1.0, components[i].id};
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});

  auto linkage = [&](std::size_t a, std::size_t b) { return sums[a * n + b] / (slots[a].size * slots[b].size); };

  while (active.size() > 1) {
    double best = -1.0;
    for (std::size_t ai = 0; ai < active.size(); ++ai) {
      for (std::size_t bi = ai + 1; bi < active.size(); ++bi) best = std::max(best, linkage(active[ai], active[bi]));
    }

    std::size_t pick_a = 0;
    std::size_t pick_b = 0;
    std::pair<int, int> pick_key{std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
    for (std::size_t ai = 0; ai < active.size(); ++ai) {
      for (std::size_t bi = ai + 1; bi < active.size(); ++bi) {
        const std::size_t a = active[ai];
        const std::size_t b = active[bi];
        if (linkage(a, b) < best - kTieEpsilon) continue;
        const std::pair<int, int> key = std::minmax(slots[a].min_id, slots[b].min_id);
        if (key < pick_key) {
          pick_key = key;
          pick_a = slots[a].min_id < slots[b].min_id ? a : b;
          pick_b = pick_a == a ? b : a;
        }
      }
    }

    d.merges.push_back({slots[pick_a].node, slots[pick_b].node, linkage(pick_a, pick_b)});
    for (std::size_t k : active) {
      if (k == pick_a || k == pick_b) continue;
      sums[pick_a * n + k] += sums[pick_b * n + k];
      sums[k * n + pick_a] = sums[pick_a * n + k];
    }
    slots[pick_a].node = static_cast<int>(n + d.merges.size() - 1);
    slots[pick_a].size += slots[pick_b].size;
    active.erase(std::find(active.begin(), active.end(), pick_b));
  }
  return d;
}

namespace {

struct DisjointSet {
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

std::vector<std::vector<int>> sorted_groups(std::vector<std::vector<int>> groups) {
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return groups;
}

struct Center {
  double x;
  double y;
};

std::vector<Center> centers_of(std::span<const Component> components) {
  std::vector<Center> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back({c.frame.x + c.frame.w / 2, c.frame.y + c.frame.h / 2});
  return out;
}

double distance(Center a, Center b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::vector<std::vector<int>> cut_dendrogram(const Dendrogram& d, double threshold) {
  const std::size_t n = d.leaves.size();
  // Any leaf position under a node represents it in the disjoint set.
  std::vector<std::size_t> rep(n + d.merges.size());
  std::iota(rep.begin(), rep.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
  DisjointSet sets(n);
  for (std::size_t k = 0; k < d.merges.size(); ++k) {
    const Merge& m = d.merges[k];
    rep[n + k] = rep[static_cast<std::size_t>(m.left)];
    if (m.correlation >= threshold) sets.unite(rep[static_cast<std::size_t>(m.left)], rep[static_cast<std::size_t>(m.right)]);
  }
  std::vector<std::vector<int>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(d.leaves[i]);
  return sorted_groups(std::move(groups));
}

Rect bounding_box(const DesignArtifact& artifact, std::span<const int> members) {
  if (members.empty()) return {};
  Rect box = artifact.node(members.front()).frame;
  for (int id : members.subspan(1)) box = union_rect(box, artifact.node(id).frame);
  return box;
}

std::vector<IconCluster> filter_icons(const std::vector<std::vector<int>>& clusters, const DesignArtifact& artifact,
                                      const IconPolicy& policy, const AssetLoader* assets) {
  const double canvas = static_cast<double>(artifact.width) * artifact.height;
  std::vector<IconCluster> out;
  out.reserve(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    IconCluster ic;
    ic.id = static_cast<int>(i);
    ic.members = clusters[i];
    std::sort(ic.members.begin(), ic.members.end());
    if (ic.members.empty()) throw ValidationError("cluster " + std::to_string(i) + " has no members");
    for (int id : ic.members) {
      if (id < 0 || id >= static_cast<int>(artifact.nodes.size()) || !artifact.node(id).is_leaf())
        throw ValidationError("cluster " + std::to_string(i) + " references non-leaf id " + std::to_string(id));
    }
    ic.bbox = bounding_box(artifact, ic.members);
    out.push_back(std::move(ic));
  }

  for (auto& ic : out) {
    const bool has_text = std::any_of(ic.members.begin(), ic.members.end(),
                                      [&](int id) { return artifact.node(id).kind == NodeKind::text; });
    if (has_text) {
      ic.reason = "text member";
      continue;
    }
    if (ic.bbox.w <= 0 || ic.bbox.h <= 0) {
      ic.reason = "empty bounding box";
      continue;
    }
    const double area_ratio = ic.bbox.area() / canvas;
    if (area_ratio > policy.max_area_ratio) {
      ic.reason = "area ratio " + fixed3(area_ratio) + " > " + fixed3(policy.max_area_ratio);
      continue;
    }
    const double aspect = ic.bbox.w / ic.bbox.h;
    if (aspect < policy.min_aspect || aspect > policy.max_aspect) {
      ic.reason = "aspect ratio " + fixed3(aspect) + " outside [" + fixed3(policy.min_aspect) + ", " +
                  fixed3(policy.max_aspect) + "]";
      continue;
    }
    if (assets) {
      std::optional<Raster> composed;
      try {
        composed = compose_raster(ic, artifact, *assets);
      } catch (const IoError&) {
        // Coverage is only judged when every member raster is available.
      }
      if (composed && !composed->empty()) {
        std::size_t opaque = 0;
        for (const Rgba& p : composed->pixels()) opaque += p.a >= 128 ? 1 : 0;
        const double coverage = static_cast<double>(opaque) / static_cast<double>(composed->pixels().size());
        if (coverage > policy.max_coverage) {
          ic.reason = "coverage " + fixed3(coverage) + " > " + fixed3(policy.max_coverage);
          continue;
        }
      }
    }
    ic.accepted = true;
  }
  return out;
}

std::vector<std::vector<int>> mean_shift(std::span<const Component> components, double bandwidth) {
  if (!(bandwidth > 0)) throw ValidationError("mean-shift bandwidth must be positive");
  const auto points = centers_of(components);
  constexpr int kMaxIterations = 500;
  const double tolerance = 1e-6 * bandwidth;

  std::vector<Center> modes;
  std::vector<std::vector<int>> groups;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Center cur = points[i];
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      double sx = 0;
      double sy = 0;
      int count = 0;
      for (const auto& p : points) {
        if (distance(p, cur) <= bandwidth) {
          sx += p.x;
          sy += p.y;
          ++count;
        }
      }
      const Center next{sx / count, sy / count};
      const double step = distance(next, cur);
      cur = next;
      if (step < tolerance) break;
    }
    std::size_t slot = modes.size();
    for (std::size_t m = 0; m < modes.size(); ++m) {
      if (distance(modes[m], cur) <= bandwidth / 2) {
        slot = m;
        break;
      }
    }
    if (slot == modes.size()) {
      modes.push_back(cur);
      groups.emplace_back();
    }
    groups[slot].push_back(components[i].id);
  }
  return sorted_groups(std::move(groups));
}

DbscanResult dbscan(std::span<const Component> components, double eps, int min_pts) {
  if (!(eps > 0)) throw ValidationError("dbscan eps must be positive");
  if (min_pts < 1) throw ValidationError("dbscan min_pts must be at least 1");
  const auto points = centers_of(components);
  const std::size_t n = points.size();

  auto neighbours = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
      if (distance(points[i], points[j]) <= eps) out.push_back(j);
    }
    return out;
  };

  constexpr int kUnvisited = -2;
  constexpr int kNoise = -1;
  std::vector<int> label(n, kUnvisited);
  std::vector<std::vector<int>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != kUnvisited) continue;
    auto seeds = neighbours(i);
    if (static_cast<int>(seeds.size()) < min_pts) {
      label[i] = kNoise;
      continue;
    }
    const int cluster = static_cast<int>(groups.size());
    groups.emplace_back();
    label[i] = cluster;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const std::size_t q = seeds[s];
      if (label[q] == kNoise) label[q] = cluster;  // border point
      if (label[q] != kUnvisited) continue;
      label[q] = cluster;
      auto reach = neighbours(q);
      if (static_cast<int>(reach.size()) >= min_pts) seeds.insert(seeds.end(), reach.begin(), reach.end());
    }
  }

  DbscanResult result;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] == kNoise) {
      result.noise.push_back(components[i].id);
    } else {
      groups[static_cast<std::size_t>(label[i])].push_back(components[i].id);
    }
  }
  std::sort(result.noise.begin(), result.noise.end());
  result.clusters = sorted_groups(std::move(groups));
  return result;
}

std::vector<IconCluster> compose_icons(const DesignArtifact& artifact, const ComposeSettings& settings,
                                       const AssetLoader* assets) {
  const auto leaves = leaf_components(artifact);
  std::vector<std::vector<int>> groups;
  switch (settings.method) {
    case ClusterMethod::hac:
      groups = cut_dendrogram(hac(leaves, settings.weights), settings.threshold);
      break;
    case ClusterMethod::mean_shift:
      groups = mean_shift(leaves, settings.bandwidth);
      break;
    case ClusterMethod::dbscan: {
      auto result = dbscan(leaves, settings.eps, settings.min_pts);
      groups = std::move(result.clusters);
      for (int id : result.noise) groups.push_back({id});
      groups = sorted_groups(std::move(groups));
      break;
    }
  }
  return filter_icons(groups, artifact, settings.policy, assets);
}

std::vector<std::vector<int>> accepted_members(const std::vector<IconCluster>& clusters) {
  std::vector<std::vector<int>> out;
  for (const auto& c : clusters) {
    if (c.accepted) out.push_back(c.members);
  }
  return out;
}

nlohmann::json clusters_to_json(const std::string& artifact_name, const std::vector<IconCluster>& clusters) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : clusters) {
    list.push_back({{"id", c.id},
                    {"members", c.members},
                    {"bbox", {{"x", c.bbox.x}, {"y", c.bbox.y}, {"w", c.bbox.w}, {"h", c.bbox.h}}},
                    {"accepted", c.accepted},
                    {"reason", c.accepted ? nlohmann::json(nullptr) : nlohmann::json(c.reason)}});
  }
  return {{"artifact", artifact_name}, {"clusters", std::move(list)}};
}

}  // namespace iconcode
