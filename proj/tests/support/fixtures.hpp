#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gazegram/aoi_tree.hpp"
#include "gazegram/model.hpp"

namespace fixtures {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi);  // inclusive
double uniform_real(Rng& rng, double lo, double hi);

/// Random hierarchy with `leaves` disjoint leaf rects laid out on a grid
/// and at most `max_depth` levels below the root.
gazegram::AoiTree random_tree(Rng& rng, int leaves, int max_depth);

/// root -> {A1, G2{A2, G1{A3, A4}}, A5}; A4 is larger than A3.
gazegram::AoiTree nested_example_tree();

/// Solid rectangles on a white background plus their ground truth.
struct RectImage {
  gazegram::RgbImage image;
  std::vector<gazegram::Rect> truth;  // sorted by (y, x)
};

/// `count` rects on a width x height canvas, every pair separated by a
/// blank gap wider than `min_gap` along at least one axis.
RectImage random_rect_image(Rng& rng, int count, int width, int height, int min_gap);

/// Three-AOI stimulus for the planted-pattern fixture.
struct PlantedStimulus {
  int width = 900;
  int height = 600;
  std::vector<gazegram::Rect> aois;  // A, B, C
};
PlantedStimulus planted_stimulus();

/// Gaze over the planted stimulus: repeated A -> B -> C visits, each
/// followed by a direct return to A or a detour through B (probability
/// `detour`), with blank gaps and short glitches into other AOIs.
gazegram::ScanPath planted_path(const std::string& participant, std::uint64_t seed,
                                double detour, int episodes);

}  // namespace fixtures
