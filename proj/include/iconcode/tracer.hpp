#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iconcode/artifact.hpp"
#include "iconcode/raster.hpp"

namespace iconcode {

struct IconCluster;

/// Black/white image; true is black.
class BinaryBitmap {
 public:
  BinaryBitmap() = default;
  BinaryBitmap(int width, int height) : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, 0) {}

  int width() const { return width_; }
  int height() const { return height_; }

  // Out-of-range coordinates read as white.
  bool get(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_ && bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool black) { bits_[static_cast<std::size_t>(y) * width_ + x] = black ? 1 : 0; }
  void flip(int x, int y) { bits_[static_cast<std::size_t>(y) * width_ + x] ^= 1; }
  std::size_t count_black() const;

  friend bool operator==(const BinaryBitmap&, const BinaryBitmap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Pixel corners: (x, y) is the top-left corner of pixel (x, y); y grows downward.
struct LatticePoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct Point {
  double x = 0;
  double y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Closed border walk along pixel edges with black on the left of every step.
/// points.front() == points.back().
struct DirectedPath {
  std::vector<LatticePoint> points;
  bool hole = false;  // encloses white inside black; wound opposite to outer borders

  std::size_t edge_count() const { return points.empty() ? 0 : points.size() - 1; }
};

// Enclosed area, positive for outer borders and negative for holes.
long long signed_area(const DirectedPath& path);

/// Cyclic polygon whose vertices are path points.
struct Polygon {
  std::vector<LatticePoint> vertices;
  double penalty = 0;  // sum over edges of mean point-to-edge distance
};

struct CubicSegment {
  Point p0, p1, p2, p3;
};

/// Closed chain of cubics; segment k ends where segment k+1 starts.
struct BezierOutline {
  std::vector<CubicSegment> segments;
};

Raster compose_raster(const IconCluster& cluster, const DesignArtifact& artifact, const AssetLoader& assets);

// Black iff (R+G+B)/3 <= 128 and alpha >= 128.
BinaryBitmap binarize(const Raster& raster);

std::vector<DirectedPath> trace_paths(const BinaryBitmap& bitmap);

double point_segment_distance(Point p, Point a, Point b);

// Fewest-vertex polygon whose edges stay within d_max of every path point they
// skip; ties broken by total penalty. Throws ValidationError for paths with
// fewer than 4 distinct points.
Polygon approximate_polygon(const DirectedPath& path, double d_max = 1.0);

// One cubic per vertex, from the midpoint of the incoming edge to the midpoint
// of the outgoing edge, with inner control points pulled a fraction s toward the vertex.
BezierOutline smooth_polygon(const Polygon& polygon, double s);

// SVG path data, one closed subpath per outline. Throws on empty input.
std::string outline_to_svg(std::span<const BezierOutline> outlines);
std::string svg_document(const std::string& path_data, int width, int height);

struct TraceOptions {
  double d_max = 1.0;
  double smoothing = 1.0;
};

// binarize -> trace -> polygon -> smooth for every border of the raster.
std::vector<BezierOutline> vectorize(const Raster& raster, const TraceOptions& options);

// Nonzero-winding scanline fill sampled at pixel centres.
BinaryBitmap rasterize_outlines(std::span<const BezierOutline> outlines, int width, int height);

struct GlyphEntry {
  std::string name;
  std::uint32_t codepoint = 0;
  std::string svg;
  int advance = 0;
};

struct GlyphManifest {
  std::string family;
  std::vector<GlyphEntry> glyphs;
};

struct GlyphSource {
  std::string name;
  std::vector<BezierOutline> outlines;
  int width = 0;
  int height = 0;
};

inline constexpr std::uint32_t kFirstPrivateUseCodepoint = 0xE000;

// Codepoints from U+E000 in input order. Throws ValidationError on duplicate names.
GlyphManifest build_glyph_set(std::span<const GlyphSource> icons, const std::string& family);

std::string codepoint_label(std::uint32_t codepoint);  // "U+E000"
nlohmann::json manifest_to_json(const GlyphManifest& manifest);

}  // namespace iconcode
