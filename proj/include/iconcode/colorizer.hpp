#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "iconcode/raster.hpp"

namespace iconcode {

/// OpenCV-style HSV: hue halved into [0, 180), saturation and value in [0, 255].
struct Hsv {
  int h = 0;
  int s = 0;
  int v = 0;
  friend bool operator==(const Hsv&, const Hsv&) = default;
};

Hsv rgb_to_hsv(int r, int g, int b);

struct Range {
  int lo = 0;
  int hi = 0;
  bool contains(int x) const { return lo <= x && x <= hi; }
};

/// Inclusive HSV box; several hue ranges express wrap-around (red).
struct ColorMask {
  std::string name;
  std::vector<Range> hue;
  Range sat;
  Range val;

  bool matches(const Hsv& c) const;
};

// Listing order doubles as the tie-break order for primary_color.
inline constexpr std::array<const char*, 8> kColorNames = {"black", "blue", "cyan", "green",
                                                           "lime",  "magenta", "red", "white"};

std::vector<ColorMask> default_masks();

// Parses the mask override format (JSON list). Throws ValidationError.
std::vector<ColorMask> parse_masks(const nlohmann::json& doc);

struct ColorReport {
  std::vector<std::pair<std::string, double>> ratios;  // in mask order
  std::optional<std::string> primary;                   // empty: no opaque pixel matched any mask
  std::size_t opaque_pixels = 0;
};

inline constexpr int kOpaqueAlpha = 128;

// Ratios are matched / opaque pixels. The earliest mask wins ties.
ColorReport primary_color(const Raster& raster, std::span<const ColorMask> masks);

}  // namespace iconcode
