#include "fixtures.hpp"

#include <cmath>

#include "json.hpp"

namespace fixtures {

using nlohmann::json;

BinaryBitmap from_ascii(const std::vector<std::string>& rows) {
  const int h = static_cast<int>(rows.size());
  const int w = h ? static_cast<int>(rows.front().size()) : 0;
  BinaryBitmap bm(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) bm.set(x, y, rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == '#');
  }
  return bm;
}

namespace {

template <typename Pred>
BinaryBitmap paint(int size, Pred inside) {
  BinaryBitmap bm(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) bm.set(x, y, inside(x + 0.5, y + 0.5));
  }
  return bm;
}

}  // namespace

BinaryBitmap disk(int size, double radius) {
  const double c = size / 2.0;
  return paint(size, [&](double x, double y) { return std::hypot(x - c, y - c) <= radius; });
}

BinaryBitmap ring(int size, double outer, double inner) {
  const double c = size / 2.0;
  return paint(size, [&](double x, double y) {
    const double d = std::hypot(x - c, y - c);
    return d <= outer && d > inner;
  });
}

BinaryBitmap square(int size, int margin) {
  return paint(size, [&](double x, double y) { return x > margin && y > margin && x < size - margin && y < size - margin; });
}

BinaryBitmap l_shape(int size, int thickness) {
  return paint(size, [&](double x, double y) {
    const bool in_box = x > 2 && y > 2 && x < size - 2 && y < size - 2;
    return in_box && (x < 2 + thickness || y > size - 2 - thickness);
  });
}

BinaryBitmap checkerboard(int cells, int cell_size) {
  const int size = cells * cell_size;
  return paint(size, [&](double x, double y) {
    return ((static_cast<int>(x) / cell_size) + (static_cast<int>(y) / cell_size)) % 2 == 0;
  });
}

BinaryBitmap random_blob(int size, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pos(size * 0.25, size * 0.75);
  std::uniform_real_distribution<double> rad(size * 0.1, size * 0.25);
  std::uniform_int_distribution<int> count(2, 4);
  struct Disk {
    double x, y, r;
  };
  std::vector<Disk> disks;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) disks.push_back({pos(rng), pos(rng), rad(rng)});
  return paint(size, [&](double x, double y) {
    for (const auto& d : disks) {
      if (std::hypot(x - d.x, y - d.y) <= d.r) return true;
    }
    return false;
  });
}

Raster to_raster(const BinaryBitmap& bm) {
  Raster r(bm.width(), bm.height());
  for (int y = 0; y < bm.height(); ++y) {
    for (int x = 0; x < bm.width(); ++x) r.at(x, y) = bm.get(x, y) ? Rgba{0, 0, 0, 255} : Rgba{0, 0, 0, 0};
  }
  return r;
}

Raster solid(int width, int height, Rgba color) { return Raster(width, height, color); }

namespace {

json frame(double x, double y, double w, double h) { return {{"x", x}, {"y", y}, {"w", w}, {"h", h}}; }

json leaf(const std::string& name, const char* kind, double x, double y, double w, double h) {
  return {{"name", name}, {"kind", kind}, {"frame", frame(x, y, w, h)}};
}

json group(const std::string& name, double x, double y, double w, double h) {
  return {{"name", name}, {"kind", "group"}, {"frame", frame(x, y, w, h)}, {"children", json::array()}};
}

// Pre-order id of every node is assigned as the tree is serialised, so ids can
// be tracked while building: the counter mirrors parse order.
struct Builder {
  int next_id = 0;
  int take() { return next_id++; }
};

void add_icon(std::mt19937& rng, Builder& ids, json& parent, std::vector<std::vector<int>>& truth, int index,
              double cx, double cy, bool caption_inside) {
  std::uniform_int_distribution<int> parts_dist(2, 4);
  std::uniform_real_distribution<double> size_dist(24, 48);
  std::uniform_real_distribution<double> jitter(-3, 3);
  std::bernoulli_distribution bitmap_kind(0.5);

  const double s = size_dist(rng);
  const int parts = parts_dist(rng);
  const char* kind = bitmap_kind(rng) ? "bitmap" : "shape";

  json g = group("icon-" + std::to_string(index), cx - s / 2, cy - s / 2, s, s + 20);
  ids.take();
  std::vector<int> members;
  std::uniform_real_distribution<double> extent(0.6, 1.0);
  for (int p = 0; p < parts; ++p) {
    const double w = s * extent(rng);
    const double h = s * extent(rng);
    // Every part covers the icon centre, so all parts overlap each other.
    g["children"].push_back(leaf("part-" + std::to_string(p), kind, cx - w / 2 + jitter(rng) * 0.2,
                                 cy - h / 2 + jitter(rng) * 0.2, w, h));
    members.push_back(ids.take());
  }
  truth.push_back(members);
  json caption = leaf("caption-" + std::to_string(index), "text", cx - 30, cy + s / 2 + 6, 60, 14);
  caption["text"] = "Label " + std::to_string(index);
  if (caption_inside) {
    g["children"].push_back(caption);
    ids.take();
    parent["children"].push_back(g);
  } else {
    parent["children"].push_back(g);
    parent["children"].push_back(caption);
    ids.take();
  }
}

}  // namespace

SynthArtifact composition_artifact(unsigned seed, int index) {
  std::mt19937 rng(seed);
  Builder ids;
  json root = group("root", 0, 0, 800, 600);
  ids.take();
  root["children"].push_back(leaf("background", "bitmap", 0, 0, 800, 600));
  ids.take();

  json header = group("header", 0, 0, 800, 60);
  ids.take();
  json title = leaf("title", "text", 300, 10, 200, 30);
  title["text"] = "Screen " + std::to_string(index);
  header["children"].push_back(title);
  ids.take();
  json subtitle = leaf("subtitle", "text", 300, 40, 200, 16);
  subtitle["text"] = "subtitle";
  header["children"].push_back(subtitle);
  ids.take();
  root["children"].push_back(header);

  std::uniform_int_distribution<int> icon_count(2, 5);
  std::bernoulli_distribution inside(0.5);
  const int icons = icon_count(rng);
  std::vector<std::vector<int>> truth;
  for (int i = 0; i < icons; ++i) {
    const double cx = 100 + 150 * (i % 5);
    const double cy = 200 + 200 * (i / 5);
    add_icon(rng, ids, root, truth, i, cx, cy, inside(rng));
  }

  json doc = {{"name", "synthetic-" + std::to_string(index)}, {"width", 800}, {"height", 600}, {"root", root}};
  SynthArtifact out;
  out.json_text = doc.dump();
  out.artifact = iconcode::parse_artifact(doc);
  out.truth = {out.artifact.name, truth};
  return out;
}

SynthArtifact large_artifact(int components, unsigned seed) {
  std::mt19937 rng(seed);
  Builder ids;
  const int per_row = 20;
  const double cell = 120;
  const int icons = (components + 3) / 4;
  const int rows = (icons + per_row - 1) / per_row;
  const double width = per_row * cell;
  const double height = rows * cell + cell;
  json root = group("root", 0, 0, width, height);
  ids.take();
  std::vector<std::vector<int>> truth;
  int leaves = 0;
  for (int i = 0; leaves < components; ++i) {
    add_icon(rng, ids, root, truth, i, cell / 2 + cell * (i % per_row), cell / 2 + cell * (i / per_row), i % 2 == 0);
    leaves = ids.next_id - 1 - (i + 1);  // minus root and one group per icon
  }
  json doc = {{"name", "large"}, {"width", static_cast<int>(width)}, {"height", static_cast<int>(height)}, {"root", root}};
  SynthArtifact out;
  out.json_text = doc.dump();
  out.artifact = iconcode::parse_artifact(doc);
  out.truth = {out.artifact.name, truth};
  return out;
}

}  // namespace fixtures
