#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace iconcode {

struct Rgba {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t a = 0;

  friend bool operator==(const Rgba&, const Rgba&) = default;
};

/// Row-major RGBA image, 8 bits per channel.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, Rgba fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  Rgba at(int x, int y) const { return pixels_[index(x, y)]; }
  Rgba& at(int x, int y) { return pixels_[index(x, y)]; }

  std::span<const Rgba> pixels() const { return pixels_; }
  std::span<Rgba> pixels() { return pixels_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Rgba> pixels_;
};

// Nearest-neighbour resample to width x height.
Raster resize_nearest(const Raster& src, int width, int height);

// PNG is the on-disk raster format. Both throw IoError.
Raster read_png(const std::filesystem::path& path);
void write_png(const Raster& raster, const std::filesystem::path& path);

// Resolves an asset reference (as written in an artifact or corpus file) to a
// raster. Throws IoError when the asset cannot be loaded.
using AssetLoader = std::function<Raster(const std::string& ref)>;

// Loads PNG assets relative to base_dir.
AssetLoader file_asset_loader(std::filesystem::path base_dir);

}  // namespace iconcode
