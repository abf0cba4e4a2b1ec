#include "iconcode/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "iconcode/composer.hpp"
#include "iconcode/errors.hpp"

namespace iconcode {

std::size_t BinaryBitmap::count_black() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

namespace {

Rgba source_over(Rgba dst, Rgba src) {
  if (dst.a == 0 || src.a == 255) return src;
  if (src.a == 0) return dst;
  const double sa = src.a / 255.0;
  const double da = dst.a / 255.0;
  const double out_a = sa + da * (1.0 - sa);
  auto channel = [&](std::uint8_t s, std::uint8_t d) {
    const double v = (s * sa + d * da * (1.0 - sa)) / out_a;
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  };
  return {channel(src.r, dst.r), channel(src.g, dst.g), channel(src.b, dst.b),
          static_cast<std::uint8_t>(std::clamp(std::lround(out_a * 255.0), 0L, 255L))};
}

}  // namespace

Raster compose_raster(const IconCluster& cluster, const DesignArtifact& artifact, const AssetLoader& assets) {
  const Rect& box = cluster.bbox;
  const long x0 = static_cast<long>(std::floor(box.x));
  const long y0 = static_cast<long>(std::floor(box.y));
  const long x1 = static_cast<long>(std::ceil(box.right()));
  const long y1 = static_cast<long>(std::ceil(box.bottom()));
  if (x1 <= x0 || y1 <= y0 || box.area() <= 0) {
    throw ValidationError("cluster " + std::to_string(cluster.id) + " has a zero-area bounding box");
  }
  Raster canvas(static_cast<int>(x1 - x0), static_cast<int>(y1 - y0));

  std::vector<int> order = cluster.members;
  std::sort(order.begin(), order.end());
  for (int id : order) {
    const Node& node = artifact.node(id);
    if (node.kind == NodeKind::text) continue;
    if (!node.image) throw IoError("component " + std::to_string(id) + " (\"" + node.name + "\") has no image asset");
    const Raster src = assets(*node.image);
    const long tw = std::lround(node.frame.w);
    const long th = std::lround(node.frame.h);
    if (tw <= 0 || th <= 0 || src.empty()) continue;
    const Raster scaled = resize_nearest(src, static_cast<int>(tw), static_cast<int>(th));
    const long ox = std::lround(node.frame.x) - x0;
    const long oy = std::lround(node.frame.y) - y0;
    for (long y = 0; y < th; ++y) {
      const long cy = oy + y;
      if (cy < 0 || cy >= canvas.height()) continue;
      for (long x = 0; x < tw; ++x) {
        const long cx = ox + x;
        if (cx < 0 || cx >= canvas.width()) continue;
        Rgba& dst = canvas.at(static_cast<int>(cx), static_cast<int>(cy));
        dst = source_over(dst, scaled.at(static_cast<int>(x), static_cast<int>(y)));
      }
    }
  }
  return canvas;
}

BinaryBitmap binarize(const Raster& raster) {
  BinaryBitmap out(raster.width(), raster.height());
  for (int y = 0; y < raster.height(); ++y) {
    for (int x = 0; x < raster.width(); ++x) {
      const Rgba p = raster.at(x, y);
      const int avg = (p.r + p.g + p.b) / 3;
      out.set(x, y, avg <= 128 && p.a >= 128);
    }
  }
  return out;
}

long long signed_area(const DirectedPath& path) {
  long long twice = 0;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const auto& a = path.points[i];
    const auto& b = path.points[i + 1];
    twice += static_cast<long long>(a.x) * b.y - static_cast<long long>(b.x) * a.y;
  }
  // Outer borders run counter-clockwise on screen, which is negative in y-down shoelace terms.
  return -twice / 2;
}

namespace {

struct Step {
  int dx;
  int dy;
};

Step left_of(Step d) { return {d.dy, -d.dx}; }
Step right_of(Step d) { return {-d.dy, d.dx}; }

// Pixel beside the unit edge from p along d; side is +1 for left, -1 for right.
bool pixel_beside(const BinaryBitmap& bm, LatticePoint p, Step d, int side) {
  const Step l = left_of(d);
  // Doubled coordinates keep this in integers: centre = 2p + d + side * l.
  const int cx = 2 * p.x + d.dx + side * l.dx;
  const int cy = 2 * p.y + d.dy + side * l.dy;
  // Both doubled coordinates are odd, so halving (c - 1) is exact.
  return bm.get((cx - 1) / 2, (cy - 1) / 2);
}

DirectedPath walk_border(const BinaryBitmap& bm, int x, int y) {
  DirectedPath path;
  const LatticePoint start{x + 1, y};
  LatticePoint p = start;
  Step d{-1, 0};
  path.points.push_back(p);
  do {
    p = {p.x + d.dx, p.y + d.dy};
    path.points.push_back(p);
    if (p == start) break;
    const bool ahead_left = pixel_beside(bm, p, d, +1);
    const bool ahead_right = pixel_beside(bm, p, d, -1);
    if (!ahead_left) {
      d = left_of(d);  // includes the ambiguous checkerboard case
    } else if (ahead_right) {
      d = right_of(d);
    }
  } while (true);
  return path;
}

void xor_enclosed(BinaryBitmap& bm, const DirectedPath& path) {
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const auto& a = path.points[i];
    const auto& b = path.points[i + 1];
    if (a.y == b.y) continue;
    const int row = std::min(a.y, b.y);
    for (int x = a.x; x < bm.width(); ++x) bm.flip(x, row);
  }
}

}  // namespace

std::vector<DirectedPath> trace_paths(const BinaryBitmap& bitmap) {
  std::vector<DirectedPath> paths;
  BinaryBitmap work = bitmap;
  int sx = 0;
  int sy = 0;
  while (true) {
    // Everything before (sx, sy) in raster order is already white in `work`.
    bool found = false;
    for (; sy < work.height(); ++sy, sx = 0) {
      for (; sx < work.width(); ++sx) {
        if (work.get(sx, sy)) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) break;

    DirectedPath path = walk_border(work, sx, sy);
    xor_enclosed(work, path);
    path.hole = !bitmap.get(sx, sy);
    if (path.hole) std::reverse(path.points.begin(), path.points.end());
    paths.push_back(std::move(path));
  }
  return paths;
}

double point_segment_distance(Point p, Point a, Point b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0;
  if (len2 > 0) t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

namespace {

Point to_point(LatticePoint p) { return {static_cast<double>(p.x), static_cast<double>(p.y)}; }

struct Edge {
  int steps;
  double penalty;
};

struct Cost {
  int count = std::numeric_limits<int>::max();
  double penalty = 0;

  bool reachable() const { return count != std::numeric_limits<int>::max(); }
  bool better_than(const Cost& o) const {
    if (count != o.count) return count < o.count;
    return penalty < o.penalty - 1e-12;
  }
};

// Admissible edges leaving each path index, by number of path steps covered.
std::vector<std::vector<Edge>> admissible_edges(const std::vector<LatticePoint>& pts, double d_max) {
  const std::size_t m = pts.size();
  std::vector<std::vector<Edge>> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Point a = to_point(pts[i]);
    for (std::size_t k = 1; k < m; ++k) {
      const Point b = to_point(pts[(i + k) % m]);
      double total = 0;
      bool ok = true;
      for (std::size_t t = 1; t < k; ++t) {
        const double dist = point_segment_distance(to_point(pts[(i + t) % m]), a, b);
        if (dist > d_max) {
          ok = false;
          break;
        }
        total += dist;
      }
      if (ok) out[i].push_back({static_cast<int>(k), k > 1 ? total / static_cast<double>(k - 1) : 0.0});
    }
  }
  return out;
}

struct Solution {
  Cost cost;
  std::vector<std::size_t> vertices;  // path indices
};

// Shortest cyclic cover starting and ending at path index `start`.
Solution solve_from(const std::vector<std::vector<Edge>>& edges, std::size_t start) {
  const std::size_t m = edges.size();
  std::vector<Cost> cost(m + 1);
  std::vector<std::size_t> prev(m + 1, 0);
  cost[0] = {0, 0.0};
  for (std::size_t o = 0; o < m; ++o) {
    if (!cost[o].reachable()) continue;
    for (const Edge& e : edges[(start + o) % m]) {
      const std::size_t to = o + static_cast<std::size_t>(e.steps);
      if (to > m) break;
      const Cost cand{cost[o].count + 1, cost[o].penalty + e.penalty};
      if (cand.better_than(cost[to])) {
        cost[to] = cand;
        prev[to] = o;
      }
    }
  }
  Solution sol{cost[m], {}};
  for (std::size_t o = m; o != 0; o = prev[o]) sol.vertices.push_back((start + prev[o]) % m);
  return sol;
}

// Same cover restricted to exactly `count` edges.
Solution solve_exact(const std::vector<std::vector<Edge>>& edges, std::size_t start, int count) {
  const std::size_t m = edges.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> pen(static_cast<std::size_t>(count) + 1, std::vector<double>(m + 1, kInf));
  std::vector<std::vector<std::size_t>> prev(static_cast<std::size_t>(count) + 1, std::vector<std::size_t>(m + 1, 0));
  pen[0][0] = 0;
  for (int c = 0; c < count; ++c) {
    for (std::size_t o = 0; o < m; ++o) {
      if (pen[c][o] == kInf) continue;
      for (const Edge& e : edges[(start + o) % m]) {
        const std::size_t to = o + static_cast<std::size_t>(e.steps);
        if (to > m) break;
        const double cand = pen[c][o] + e.penalty;
        if (cand < pen[c + 1][to] - 1e-12) {
          pen[c + 1][to] = cand;
          prev[c + 1][to] = o;
        }
      }
    }
  }
  Solution sol;
  if (pen[count][m] == kInf) return sol;
  sol.cost = {count, pen[count][m]};
  std::size_t o = m;
  for (int c = count; c > 0; --c) {
    sol.vertices.push_back((start + prev[c][o]) % m);
    o = prev[c][o];
  }
  return sol;
}

}  // namespace

Polygon approximate_polygon(const DirectedPath& path, double d_max) {
  if (!(d_max > 0)) throw ValidationError("d_max must be positive");
  if (path.points.size() < 5 || !(path.points.front() == path.points.back())) {
    throw ValidationError("degenerate path: need a closed path with at least 4 points");
  }
  const std::vector<LatticePoint> pts(path.points.begin(), path.points.end() - 1);
  const std::size_t m = pts.size();
  const auto edges = admissible_edges(pts, d_max);

  // Some edge covers the step leaving index 0, so an optimal polygon has a
  // vertex within the longest edge length of it.
  int longest = 1;
  for (const auto& list : edges) {
    if (!list.empty()) longest = std::max(longest, list.back().steps);
  }
  const std::size_t last_start = std::min<std::size_t>(static_cast<std::size_t>(longest), m - 1);

  constexpr int kMinVertices = 4;
  Solution best;
  for (std::size_t s = 0; s <= last_start; ++s) {
    Solution sol = solve_from(edges, s);
    if (sol.cost.better_than(best.cost)) best = std::move(sol);
  }
  if (best.cost.count < kMinVertices) {
    best = {};
    for (int count = kMinVertices; !best.cost.reachable() && count <= static_cast<int>(m); ++count) {
      for (std::size_t s = 0; s <= last_start; ++s) {
        Solution sol = solve_exact(edges, s, count);
        if (sol.cost.reachable() && sol.cost.better_than(best.cost)) best = std::move(sol);
      }
    }
  }

  std::sort(best.vertices.begin(), best.vertices.end());
  Polygon poly;
  poly.penalty = best.cost.penalty;
  for (std::size_t idx : best.vertices) poly.vertices.push_back(pts[idx]);
  return poly;
}

BezierOutline smooth_polygon(const Polygon& polygon, double s) {
  if (!(s >= 0 && s <= 1)) throw ValidationError("smoothing fraction must lie in [0, 1]");
  const std::size_t n = polygon.vertices.size();
  if (n < 3) throw ValidationError("polygon needs at least 3 vertices to smooth");
  BezierOutline out;
  out.segments.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Point prev = to_point(polygon.vertices[(k + n - 1) % n]);
    const Point v = to_point(polygon.vertices[k]);
    const Point next = to_point(polygon.vertices[(k + 1) % n]);
    const Point p0{(prev.x + v.x) / 2, (prev.y + v.y) / 2};
    const Point p3{(v.x + next.x) / 2, (v.y + next.y) / 2};
    const Point p1{p0.x + s * (v.x - p0.x), p0.y + s * (v.y - p0.y)};
    const Point p2{p3.x + s * (v.x - p3.x), p3.y + s * (v.y - p3.y)};
    out.segments.push_back({p0, p1, p2, p3});
  }
  return out;
}

namespace {

void append_coord(std::string& out, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string_view text(buf);
  if (text == "-0.000") text = "0.000";
  out += text;
}

void append_point(std::string& out, Point p) {
  append_coord(out, p.x);
  out += ' ';
  append_coord(out, p.y);
}

}  // namespace

std::string outline_to_svg(std::span<const BezierOutline> outlines) {
  if (outlines.empty()) throw ValidationError("no outlines to convert");
  std::string out;
  for (const auto& outline : outlines) {
    if (outline.segments.empty()) continue;
    if (!out.empty()) out += ' ';
    out += "M ";
    append_point(out, outline.segments.front().p0);
    for (const auto& seg : outline.segments) {
      out += " C ";
      append_point(out, seg.p1);
      out += ", ";
      append_point(out, seg.p2);
      out += ", ";
      append_point(out, seg.p3);
    }
    out += " Z";
  }
  return out;
}

std::string svg_document(const std::string& path_data, int width, int height) {
  const std::string w = std::to_string(width);
  const std::string h = std::to_string(height);
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h + "\" viewBox=\"0 0 " + w +
         " " + h + "\">\n  <path fill-rule=\"nonzero\" d=\"" + path_data + "\"/>\n</svg>\n";
}

std::vector<BezierOutline> vectorize(const Raster& raster, const TraceOptions& options) {
  std::vector<BezierOutline> outlines;
  for (const auto& path : trace_paths(binarize(raster))) {
    outlines.push_back(smooth_polygon(approximate_polygon(path, options.d_max), options.smoothing));
  }
  return outlines;
}

BinaryBitmap rasterize_outlines(std::span<const BezierOutline> outlines, int width, int height) {
  struct Line {
    Point a, b;
  };
  constexpr int kFlattenSteps = 32;
  std::vector<Line> lines;
  for (const auto& outline : outlines) {
    for (const auto& seg : outline.segments) {
      Point prev = seg.p0;
      for (int i = 1; i <= kFlattenSteps; ++i) {
        const double t = static_cast<double>(i) / kFlattenSteps;
        const double u = 1 - t;
        const double b0 = u * u * u, b1 = 3 * u * u * t, b2 = 3 * u * t * t, b3 = t * t * t;
        const Point cur{b0 * seg.p0.x + b1 * seg.p1.x + b2 * seg.p2.x + b3 * seg.p3.x,
                        b0 * seg.p0.y + b1 * seg.p1.y + b2 * seg.p2.y + b3 * seg.p3.y};
        lines.push_back({prev, cur});
        prev = cur;
      }
    }
  }

  BinaryBitmap out(width, height);
  std::vector<std::pair<double, int>> crossings;
  for (int y = 0; y < height; ++y) {
    const double sy = y + 0.5;
    crossings.clear();
    for (const auto& l : lines) {
      const bool down = l.a.y <= sy && sy < l.b.y;
      const bool up = l.b.y <= sy && sy < l.a.y;
      if (!down && !up) continue;
      const double t = (sy - l.a.y) / (l.b.y - l.a.y);
      crossings.emplace_back(l.a.x + t * (l.b.x - l.a.x), down ? 1 : -1);
    }
    std::sort(crossings.begin(), crossings.end());
    std::size_t next = 0;
    int winding = 0;
    for (int x = 0; x < width; ++x) {
      const double sx = x + 0.5;
      while (next < crossings.size() && crossings[next].first < sx) winding += crossings[next++].second;
      out.set(x, y, winding != 0);
    }
  }
  return out;
}

GlyphManifest build_glyph_set(std::span<const GlyphSource> icons, const std::string& family) {
  GlyphManifest manifest;
  manifest.family = family;
  std::set<std::string> seen;
  std::uint32_t cp = kFirstPrivateUseCodepoint;
  for (const auto& icon : icons) {
    if (!seen.insert(icon.name).second) throw ValidationError("duplicate glyph name \"" + icon.name + "\"");
    GlyphEntry entry;
    entry.name = icon.name;
    entry.codepoint = cp++;
    entry.svg = icon.outlines.empty() ? std::string() : outline_to_svg(icon.outlines);
    entry.advance = icon.width;
    manifest.glyphs.push_back(std::move(entry));
  }
  return manifest;
}

std::string codepoint_label(std::uint32_t codepoint) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(codepoint));
  return buf;
}

nlohmann::json manifest_to_json(const GlyphManifest& manifest) {
  nlohmann::json glyphs = nlohmann::json::array();
  for (const auto& g : manifest.glyphs) {
    glyphs.push_back({{"name", g.name}, {"codepoint", codepoint_label(g.codepoint)}, {"svg", g.svg}, {"advance", g.advance}});
  }
  return {{"family", manifest.family}, {"glyphs", std::move(glyphs)}};
}

}  // namespace iconcode
