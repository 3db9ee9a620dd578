#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "gazegram/aoi_tree.hpp"
#include "gazegram/model.hpp"

namespace gazegram {

/// Mosaic cell size (pixels) and palette size for automatic AOI detection.
struct DetectionParams {
  int cell_size = 8;
  int colors = 4;
};

void validate(const DetectionParams& params);

/// Palette label of a mosaic cell. 0 is the blank (background) color,
/// 1..colors-1 are item colors.
using CellLabel = std::uint8_t;
inline constexpr CellLabel kBlankCell = 0;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct CellGrid {
  int cols = 0;
  int rows = 0;
  std::vector<CellLabel> cells;
  /// Palette indexed by label; palette[0] is the blank color.
  std::vector<Rgb> palette;

  CellLabel at(int col, int row) const {
    return cells[static_cast<std::size_t>(row) * cols + col];
  }
  CellLabel& at(int col, int row) {
    return cells[static_cast<std::size_t>(row) * cols + col];
  }
  bool inside(int col, int row) const {
    return col >= 0 && row >= 0 && col < cols && row < rows;
  }
  std::size_t blank_count() const;
};

/// A rectangle (in cell units) grown from one corner cell.
struct CandidateRect {
  Rect rect;
  int corner_col = 0;
  int corner_row = 0;
};

/// Median-cut palette of at most `colors` entries. Boxes split on their
/// widest channel (ties R > G > B) at the median, keeping equal channel
/// values in one box. Each entry is its box mean.
std::vector<Rgb> median_cut(const std::vector<Rgb>& samples, int colors);

CellGrid mosaic_and_quantize(const RgbImage& stimulus, const DetectionParams& params);

/// Neighbour order around a 3x3 window centre.
enum Neighbour { kNW = 0, kN, kNE, kE, kSE, kS, kSW, kW };
using Neighbourhood = std::array<CellLabel, 8>;

/// Fill decision for a blank centre cell. Returns the item label to paint
/// when condition A (at least five neighbours of one item colour, two of
/// them diagonal) or condition B (a diagonal neighbour plus both orthogonal
/// neighbours adjacent to it, all one item colour) holds. When several
/// labels qualify the one with more matching neighbours wins, then the
/// lower label.
std::optional<CellLabel> fill_decision(const Neighbourhood& around);

/// One row-major raster pass of fill_decision over every blank cell,
/// updating in place. Cells outside the grid count as blank.
CellGrid fill_pass(const CellGrid& grid);

/// Repeats fill_pass until nothing changes (at most cols * rows passes).
CellGrid fill_to_fixpoint(const CellGrid& grid);

/// One candidate per convex corner cell of every item region, grown along
/// the two border runs of the corner's colour.
std::vector<CandidateRect> fit_rectangles(const CellGrid& grid);

/// Cell-space arrangement: dedupe, then merge adjoining or overlapping
/// pairs into their bounding box unless that box would intersect a third
/// rect, in which case the smaller (later on ties) is dropped. Output rects
/// are in cell units.
std::vector<Rect> arrange_cells(const std::vector<CandidateRect>& candidates);

/// arrange_cells followed by conversion to pixels (scale by cell size,
/// clamp to the stimulus).
std::vector<Rect> arrange(const std::vector<CandidateRect>& candidates,
                          int cell_size, int width, int height);

/// Two cell rects adjoin when one grown by a cell on every side meets the other.
bool adjoining_or_overlapping(const Rect& a, const Rect& b);

struct DetectionResult {
  CellGrid quantized;
  CellGrid filled;
  std::vector<CandidateRect> candidates;
  std::vector<Rect> rects;  // pixels, in symbol order
  AoiTree tree;
};

/// Full pipeline; leaves are ordered top-to-bottom then left-to-right.
DetectionResult detect_aois_detailed(const RgbImage& stimulus,
                                     const DetectionParams& params);
AoiTree detect_aois(const RgbImage& stimulus, const DetectionParams& params);

/// Debug raster: quantized grid upscaled to pixels with candidate outlines
/// in red and final rects in green.
RgbImage render_detection_debug(const DetectionResult& result,
                                const DetectionParams& params, int width,
                                int height);

}  // namespace gazegram
