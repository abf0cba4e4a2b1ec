#include "iconcode/colorizer.hpp"

#include <algorithm>
#include <cmath>

#include "iconcode/errors.hpp"

namespace iconcode {

Hsv rgb_to_hsv(int r, int g, int b) {
  const int hi = std::max({r, g, b});
  const int lo = std::min({r, g, b});
  const int delta = hi - lo;
  Hsv out;
  out.v = hi;
  out.s = hi == 0 ? 0 : static_cast<int>(std::lround(255.0 * delta / hi));
  if (delta == 0) return out;

  double degrees = 0;
  if (hi == r) {
    degrees = 60.0 * (g - b) / delta;
  } else if (hi == g) {
    degrees = 120.0 + 60.0 * (b - r) / delta;
  } else {
    degrees = 240.0 + 60.0 * (r - g) / delta;
  }
  if (degrees < 0) degrees += 360.0;
  out.h = static_cast<int>(std::lround(degrees / 2.0)) % 180;
  return out;
}

bool ColorMask::matches(const Hsv& c) const {
  if (!sat.contains(c.s) || !val.contains(c.v)) return false;
  return std::any_of(hue.begin(), hue.end(), [&](const Range& r) { return r.contains(c.h); });
}

std::vector<ColorMask> default_masks() {
  const Range any_hue{0, 180};
  const Range chroma_s{43, 255};
  const Range chroma_v{46, 255};
  return {
      {"black", {any_hue}, {0, 255}, {0, 46}},
      {"blue", {{100, 124}}, chroma_s, chroma_v},
      {"cyan", {{78, 99}}, chroma_s, chroma_v},
      {"green", {{41, 77}}, chroma_s, chroma_v},
      {"lime", {{26, 40}}, chroma_s, chroma_v},
      {"magenta", {{125, 155}}, chroma_s, chroma_v},
      {"red", {{0, 10}, {156, 180}}, chroma_s, chroma_v},
      {"white", {any_hue}, {0, 30}, {221, 255}},
  };
}

namespace {

Range parse_range(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ValidationError(where + ": expected [lo, hi] integers");
  }
  Range r{j[0].get<int>(), j[1].get<int>()};
  if (r.lo > r.hi) throw ValidationError(where + ": lo exceeds hi");
  return r;
}

}  // namespace

std::vector<ColorMask> parse_masks(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ValidationError("mask file must be a JSON list");
  std::vector<ColorMask> masks;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& m = doc[i];
    const std::string where = "mask[" + std::to_string(i) + "]";
    if (!m.is_object() || !m.contains("name") || !m["name"].is_string()) throw ValidationError(where + ": missing name");
    ColorMask mask;
    mask.name = m["name"].get<std::string>();
    if (!m.contains("h") || !m["h"].is_array() || m["h"].empty()) throw ValidationError(where + ": missing hue ranges");
    for (const auto& h : m["h"]) mask.hue.push_back(parse_range(h, where + ".h"));
    if (!m.contains("s") || !m.contains("v")) throw ValidationError(where + ": missing s or v range");
    mask.sat = parse_range(m["s"], where + ".s");
    mask.val = parse_range(m["v"], where + ".v");
    masks.push_back(std::move(mask));
  }
  return masks;
}

ColorReport primary_color(const Raster& raster, std::span<const ColorMask> masks) {
  ColorReport report;
  std::vector<std::size_t> hits(masks.size(), 0);
  for (const Rgba& p : raster.pixels()) {
    if (p.a < kOpaqueAlpha) continue;
    ++report.opaque_pixels;
    const Hsv c = rgb_to_hsv(p.r, p.g, p.b);
    for (std::size_t m = 0; m < masks.size(); ++m) hits[m] += masks[m].matches(c) ? 1 : 0;
  }

  std::size_t best = 0;
  for (std::size_t m = 0; m < masks.size(); ++m) {
    const double ratio =
        report.opaque_pixels == 0 ? 0.0 : static_cast<double>(hits[m]) / static_cast<double>(report.opaque_pixels);
    report.ratios.emplace_back(masks[m].name, ratio);
    if (hits[m] > hits[best]) best = m;
  }
  if (!masks.empty() && hits[best] > 0) report.primary = masks[best].name;
  return report;
}

}  // namespace iconcode
