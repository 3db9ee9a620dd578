#pragma once

#include <optional>
#include <string>

#include "gazegram/aoi_tree.hpp"
#include "gazegram/layout.hpp"
#include "gazegram/model.hpp"

namespace gazegram {

struct SvgOptions {
  int width = 0;   // 0: derive from the AOI bounds
  int height = 0;
  /// Embedded as a whitened underlay when present.
  std::optional<RgbImage> stimulus;
  double whiten = 0.5;  // opacity of the white wash over the stimulus
};

/// Stimulus, the AOIs visible at `level` in their hierarchy hues (label
/// "id:char" in the lower-left corner) and the transition graph with arrows.
std::string render_svg(const AoiTree& tree, Level level, const TransitionGraph& graph,
                       const SvgOptions& options);

}  // namespace gazegram
