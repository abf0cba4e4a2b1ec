#include "doctest.h"

#include <algorithm>
#include <regex>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "trace_checks.hpp"
#include "iconcode/composer.hpp"
#include "iconcode/errors.hpp"
#include "iconcode/tracer.hpp"

using namespace iconcode;
using fixtures::from_ascii;

namespace {

long long area_sum(const std::vector<DirectedPath>& paths) {
  long long total = 0;
  for (const auto& p : paths) total += signed_area(p);
  return total;
}

void check_paths(const BinaryBitmap& bm) {
  const auto paths = trace_paths(bm);
  for (const auto& p : paths) CHECK(trace_checks::black_on_left(bm, p) == "");
  CHECK(area_sum(paths) == static_cast<long long>(bm.count_black()));
}

// Index of every polygon vertex along the path, walking forward from the first.
std::vector<std::size_t> vertex_indices(const DirectedPath& path, const Polygon& poly) {
  const std::size_t m = path.points.size() - 1;
  std::vector<std::size_t> out;
  std::size_t i = 0;
  for (const auto& v : poly.vertices) {
    while (i < m && !(path.points[i] == v)) ++i;
    REQUIRE(i < m);
    out.push_back(i++);
  }
  return out;
}

void check_coverage(const DirectedPath& path, const Polygon& poly, double d_max) {
  const auto idx = vertex_indices(path, poly);
  const std::size_t m = path.points.size() - 1;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t from = idx[k], to = idx[(k + 1) % idx.size()];
    const auto a = path.points[from], b = path.points[to];
    for (std::size_t t = (from + 1) % m; t != to; t = (t + 1) % m) {
      const auto p = path.points[t];
      CHECK(point_segment_distance({double(p.x), double(p.y)}, {double(a.x), double(a.y)}, {double(b.x), double(b.y)}) <=
            d_max + 1e-12);
    }
  }
}

Raster solid(int w, int h, Rgba c) { return Raster(w, h, c); }

}  // namespace

TEST_CASE("binarize thresholds") {
  Raster r(4, 1);
  r.at(0, 0) = {255, 255, 255, 255};
  r.at(1, 0) = {128, 128, 128, 255};
  r.at(2, 0) = {255, 0, 0, 255};
  r.at(3, 0) = {0, 0, 0, 127};
  const auto bm = binarize(r);
  CHECK_FALSE(bm.get(0, 0));
  CHECK(bm.get(1, 0));
  CHECK(bm.get(2, 0));
  CHECK_FALSE(bm.get(3, 0));
}

TEST_CASE("trace small bitmaps") {
  CHECK(trace_paths(BinaryBitmap(5, 5)).empty());

  const auto dot = from_ascii({"...", ".#.", "..."});
  const auto paths = trace_paths(dot);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].edge_count() == 4);
  CHECK(signed_area(paths[0]) == 1);
  CHECK(trace_checks::black_on_left(dot, paths[0]) == "");

  const auto annulus = from_ascii({"#####", "#...#", "#...#", "#...#", "#####"});
  const auto ring = trace_paths(annulus);
  REQUIRE(ring.size() == 2);
  CHECK(std::count_if(ring.begin(), ring.end(), [](const auto& p) { return p.hole; }) == 1);
  check_paths(annulus);
}

TEST_CASE("tracing invariants on glyph fixtures") {
  check_paths(fixtures::disk(24, 9));
  check_paths(fixtures::ring(32, 14, 8));
  check_paths(fixtures::square(20, 3));
  check_paths(fixtures::l_shape(20, 5));
  check_paths(fixtures::checkerboard(2, 4));
  check_paths(fixtures::checkerboard(5, 1));
  for (unsigned seed = 1; seed <= 10; ++seed) check_paths(fixtures::random_blob(24, seed));
  CHECK(trace_paths(fixtures::disk(24, 9)).size() == 1);
  CHECK(trace_paths(fixtures::ring(32, 14, 8)).size() == 2);
  // Diagonal neighbours are separate regions under the turn-left rule.
  CHECK(trace_paths(fixtures::checkerboard(2, 4)).size() == 2);
}

TEST_CASE("polygon examples") {
  const auto rect = trace_paths(from_ascii({"......", ".####.", ".####.", ".####.", "......"}));
  REQUIRE(rect.size() == 1);
  const auto poly = approximate_polygon(rect[0]);
  std::vector<LatticePoint> corners = poly.vertices;
  std::sort(corners.begin(), corners.end(), [](auto a, auto b) { return std::pair(a.y, a.x) < std::pair(b.y, b.x); });
  CHECK(corners == std::vector<LatticePoint>{{1, 1}, {5, 1}, {1, 4}, {5, 4}});

  const auto pixel = trace_paths(from_ascii({"#"}));
  CHECK(approximate_polygon(pixel[0]).vertices.size() == 4);

  const auto l = trace_paths(from_ascii({"###...", "###...", "###...", "######", "######", "######"}));
  const auto lpoly = approximate_polygon(l[0]);
  CHECK(lpoly.vertices.size() == 6);
  CHECK(oracles::brute_polygon(l[0], 1.0).count == 6);
}

TEST_CASE("polygon agrees with exhaustive search") {
  std::vector<BinaryBitmap> shapes = {
      from_ascii({"####", "####", "####"}),
      from_ascii({"##..", "##..", "####"}),
      from_ascii({"###", "#.#", "###"}),
      from_ascii({".##", "###", "##."}),
      from_ascii({"#..", "##.", "###"}),
      from_ascii({"##", "#.", "##"}),
      from_ascii({"#####", "#####"}),
      from_ascii({".#.", "###", ".#."}),
  };
  std::mt19937 rng(17);
  for (int i = 0; i < 30; ++i) {
    BinaryBitmap bm(3, 3);
    for (int y = 0; y < 3; ++y) {
      for (int x = 0; x < 3; ++x) bm.set(x, y, rng() % 3 != 0);
    }
    shapes.push_back(bm);
  }
  int compared = 0;
  for (const auto& bm : shapes) {
    for (const auto& path : trace_paths(bm)) {
      if (path.edge_count() > 20) continue;
      const auto got = approximate_polygon(path, 1.0);
      const auto want = oracles::brute_polygon(path, 1.0);
      CHECK(got.vertices.size() == static_cast<std::size_t>(want.count));
      CHECK(got.penalty == doctest::Approx(want.penalty).epsilon(1e-9));
      CHECK(got.vertices.size() <= path.edge_count());
      check_coverage(path, got, 1.0);
      ++compared;
    }
  }
  CHECK(compared > 30);
}

TEST_CASE("polygon coverage on larger shapes") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    for (const auto& path : trace_paths(fixtures::random_blob(24, seed))) {
      const auto poly = approximate_polygon(path, 1.0);
      CHECK(poly.vertices.size() >= 4);
      check_coverage(path, poly, 1.0);
    }
  }
}

TEST_CASE("smoothing geometry") {
  Polygon square{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}, 0};
  const auto flat = smooth_polygon(square, 0.0);
  for (const auto& seg : flat.segments) {
    CHECK(seg.p1 == seg.p0);
    CHECK(seg.p2 == seg.p3);
  }
  const auto outline = smooth_polygon(square, 0.55);
  REQUIRE(outline.segments.size() == 4);
  const std::vector<Point> mids = {{0, 1}, {1, 0}, {2, 1}, {1, 2}};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(outline.segments[k].p0 == mids[k]);
    CHECK(outline.segments[k].p3 == outline.segments[(k + 1) % 4].p0);
  }

  Polygon tri{{{0, 0}, {10, 0}, {5, 9}}, 0};
  const auto t = smooth_polygon(tri, 0.55);
  REQUIRE(t.segments.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& s = t.segments[k];
    const auto v = tri.vertices[k];
    const double cross = (s.p1.x - s.p0.x) * (v.y - s.p0.y) - (s.p1.y - s.p0.y) * (v.x - s.p0.x);
    CHECK(std::abs(cross) < 1e-9);
  }
  CHECK_THROWS_AS(smooth_polygon(square, 1.5), ValidationError);
}

TEST_CASE("svg path text") {
  CHECK_THROWS_AS(outline_to_svg({}), ValidationError);
  Polygon square{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}, 0};
  const std::vector<BezierOutline> one = {smooth_polygon(square, 0.5)};
  const auto d = outline_to_svg(one);
  CHECK(std::count(d.begin(), d.end(), 'M') == 1);
  CHECK(std::count(d.begin(), d.end(), 'C') == 4);
  CHECK(std::count(d.begin(), d.end(), 'Z') == 1);
  CHECK(d.rfind("M 0.000 1.000 C", 0) == 0);
  CHECK(d.find("-0.000") == std::string::npos);

  const auto ring = vectorize(fixtures::to_raster(fixtures::ring(32, 14, 8)), TraceOptions());
  REQUIRE(ring.size() == 2);
  const auto rd = outline_to_svg(ring);
  CHECK(std::count(rd.begin(), rd.end(), 'M') == 2);
  CHECK(std::count(rd.begin(), rd.end(), 'Z') == 2);
  const auto doc = svg_document(rd, 32, 32);
  CHECK(doc.find("viewBox=\"0 0 32 32\"") != std::string::npos);
}

TEST_CASE("round trip fidelity on convex fixtures") {
  std::vector<BinaryBitmap> convex;
  for (int r = 7; r <= 30; r += 3) convex.push_back(fixtures::disk(2 * r + 4, r));
  for (int size = 16; size <= 64; size += 8) convex.push_back(fixtures::square(size, 2));
  for (const auto& bm : convex) {
    const auto outlines = vectorize(fixtures::to_raster(bm), TraceOptions());
    const auto back = rasterize_outlines(outlines, bm.width(), bm.height());
    CHECK(trace_checks::pixel_iou(bm, back) >= 0.90);
  }
}

TEST_CASE("vectorize is deterministic") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto r = fixtures::to_raster(fixtures::random_blob(32, seed));
    CHECK(outline_to_svg(vectorize(r, TraceOptions())) == outline_to_svg(vectorize(r, TraceOptions())));
  }
}

TEST_CASE("rasterize fills nonzero regions") {
  Polygon square{{{2, 2}, {6, 2}, {6, 6}, {2, 6}}, 0};
  const std::vector<BezierOutline> outlines = {smooth_polygon(square, 0.0)};
  const auto bm = rasterize_outlines(outlines, 8, 8);
  CHECK(bm.get(4, 4));
  CHECK_FALSE(bm.get(0, 0));
  CHECK_FALSE(bm.get(7, 7));
}

TEST_CASE("compose raster") {
  DesignArtifact a;
  a.name = "t";
  a.width = 100;
  a.height = 100;
  a.nodes.push_back({});
  auto add = [&](Rect frame, std::string image) {
    Node n;
    n.id = static_cast<int>(a.nodes.size());
    n.parent = 0;
    n.kind = NodeKind::bitmap;
    n.frame = frame;
    n.image = std::move(image);
    a.nodes[0].children.push_back(n.id);
    a.nodes.push_back(n);
    return n.id;
  };
  const int red = add({10, 10, 4, 3}, "red");
  const int blue = add({20, 10, 2, 2}, "blue");
  const int over = add({11, 10, 2, 2}, "blue");
  Raster red_img(4, 3, {255, 0, 0, 255});
  red_img.at(0, 0) = {1, 2, 3, 40};
  AssetLoader loader = [&](const std::string& ref) {
    if (ref == "red") return red_img;
    if (ref == "blue") return solid(2, 2, {0, 0, 255, 255});
    throw IoError("missing " + ref);
  };

  IconCluster single;
  single.members = {red};
  single.bbox = a.node(red).frame;
  CHECK(compose_raster(single, a, loader) == red_img);

  IconCluster pair;
  pair.members = {red, blue};
  pair.bbox = {10, 10, 12, 3};
  const auto both = compose_raster(pair, a, loader);
  CHECK(both.width() == 12);
  CHECK(both.height() == 3);
  CHECK(both.at(1, 1) == Rgba{255, 0, 0, 255});
  CHECK(both.at(10, 0) == Rgba{0, 0, 255, 255});
  CHECK(both.at(6, 1).a == 0);
  CHECK(both.at(11, 2).a == 0);

  IconCluster stacked;
  stacked.members = {red, over};
  stacked.bbox = a.node(red).frame;
  const auto top = compose_raster(stacked, a, loader);
  CHECK(top.at(1, 0) == Rgba{0, 0, 255, 255});
  CHECK(top.at(3, 0) == Rgba{255, 0, 0, 255});

  a.nodes[static_cast<std::size_t>(blue)].image = "gone";
  CHECK_THROWS_AS(compose_raster(pair, a, loader), IoError);
}

TEST_CASE("glyph packaging") {
  CHECK(build_glyph_set({}, "f").glyphs.empty());
  const auto ring = vectorize(fixtures::to_raster(fixtures::ring(32, 14, 8)), TraceOptions());
  const std::vector<GlyphSource> two = {{"a", ring, 32, 32}, {"b", ring, 32, 32}};
  const auto m = build_glyph_set(two, "f");
  REQUIRE(m.glyphs.size() == 2);
  CHECK(m.glyphs[0].codepoint == 0xE000);
  CHECK(m.glyphs[1].codepoint == 0xE001);
  CHECK(codepoint_label(m.glyphs[1].codepoint) == "U+E001");
  CHECK(manifest_to_json(m)["glyphs"][0]["codepoint"] == "U+E000");
  const std::vector<GlyphSource> dup = {{"a", ring, 32, 32}, {"b", ring, 32, 32}, {"a", ring, 32, 32}};
  CHECK_THROWS_AS(build_glyph_set(dup, "f"), ValidationError);
}
