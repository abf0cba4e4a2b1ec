#pragma once

#include <random>
#include <string>
#include <vector>

#include "iconcode/eval.hpp"
#include "iconcode/raster.hpp"
#include "iconcode/tracer.hpp"

namespace fixtures {

using iconcode::BinaryBitmap;
using iconcode::Raster;
using iconcode::Rgba;

// '#' is black, anything else white.
BinaryBitmap from_ascii(const std::vector<std::string>& rows);

BinaryBitmap disk(int size, double radius);
BinaryBitmap ring(int size, double outer, double inner);
BinaryBitmap square(int size, int margin);
BinaryBitmap l_shape(int size, int thickness);
BinaryBitmap checkerboard(int cells, int cell_size);
// Union of a few random disks and boxes, always non-empty.
BinaryBitmap random_blob(int size, unsigned seed);

// Black opaque pixels on a transparent background.
Raster to_raster(const BinaryBitmap& bm);
Raster solid(int width, int height, Rgba color);

struct SynthArtifact {
  iconcode::DesignArtifact artifact;
  iconcode::CompositionTruth truth;
  std::string json_text;
};

// 2-5 icons made of overlapping same-kind parts in their own group, plus a
// full-canvas background, a header group of text and per-icon captions.
SynthArtifact composition_artifact(unsigned seed, int index);

// Grid of icons and captions with at least `components` leaves.
SynthArtifact large_artifact(int components, unsigned seed);

}  // namespace fixtures
