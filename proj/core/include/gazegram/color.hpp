#pragma once

#include <map>
#include <string>
#include <vector>

#include "gazegram/aoi_tree.hpp"

namespace gazegram {

inline constexpr double kMinHue = 0.0;
inline constexpr double kMaxHue = 300.0;

/// Colour cost of every node: 1 per leaf, sum of children otherwise.
std::map<int, int> assign_costs(const AoiTree& tree);

struct NodeColor {
  int cost = 0;
  std::vector<double> hues;  // contiguous slice of the global hue list
  double display_hue = 0.0;
};

struct ColorAssignment {
  std::vector<double> palette;  // global hue list, one entry per leaf
  std::map<int, NodeColor> nodes;

  double hue_of(int id) const { return nodes.at(id).display_hue; }
};

/// Spreads leaf-count hues evenly over [0, 300] (inclusive) and hands each
/// child a contiguous slice sized by its cost. A group shows the hue of its
/// largest leaf.
ColorAssignment assign_hues(const AoiTree& tree);

/// CSS colour for a hue at fixed saturation/lightness (70 % / 50 %).
std::string hsl_css(double hue);

/// "#rrggbb" for HSL with s, l in [0, 1].
std::string hsl_to_hex(double hue, double saturation, double lightness);

}  // namespace gazegram
