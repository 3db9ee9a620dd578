#include "gazegram/color.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gazegram {
namespace {

int fill_costs(const AoiNode& node, std::map<int, int>& out) {
  int cost = 0;
  if (node.is_leaf()) {
    cost = 1;
  } else {
    for (const auto& c : node.children) cost += fill_costs(c, out);
  }
  out[node.id] = cost;
  return cost;
}

void distribute(const AoiNode& node, std::vector<double> hues, const std::map<int, int>& costs,
                ColorAssignment& out) {
  std::size_t offset = 0;
  for (const auto& c : node.children) {
    const auto take = static_cast<std::size_t>(costs.at(c.id));
    std::vector<double> slice(hues.begin() + static_cast<std::ptrdiff_t>(offset),
                              hues.begin() + static_cast<std::ptrdiff_t>(offset + take));
    offset += take;
    distribute(c, std::move(slice), costs, out);
  }
  NodeColor& color = out.nodes[node.id];
  color.cost = costs.at(node.id);
  color.hues = std::move(hues);
}

}  // namespace

std::map<int, int> assign_costs(const AoiTree& tree) {
  std::map<int, int> out;
  fill_costs(tree.root(), out);
  return out;
}

ColorAssignment assign_hues(const AoiTree& tree) {
  const auto costs = assign_costs(tree);
  const auto n = static_cast<std::size_t>(costs.at(tree.root().id));
  ColorAssignment out;
  out.palette.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.palette[i] = n == 1 ? kMinHue
                            : kMinHue + (kMaxHue - kMinHue) * static_cast<double>(i) /
                                            static_cast<double>(n - 1);
  }
  distribute(tree.root(), out.palette, costs, out);

  for (auto& [id, color] : out.nodes) {
    const AoiNode* node = tree.find(id);
    const AoiNode* big = node ? largest_leaf(*node) : nullptr;
    if (big && big != node) {
      color.display_hue = out.nodes.at(big->id).hues.front();
    } else if (!color.hues.empty()) {
      color.display_hue = color.hues.front();
    }
  }
  return out;
}

std::string hsl_to_hex(double hue, double saturation, double lightness) {
  const double c = (1.0 - std::fabs(2.0 * lightness - 1.0)) * saturation;
  const double h = std::fmod(std::fmod(hue, 360.0) + 360.0, 360.0) / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(h, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (h < 1) {
    r = c, g = x;
  } else if (h < 2) {
    r = x, g = c;
  } else if (h < 3) {
    g = c, b = x;
  } else if (h < 4) {
    g = x, b = c;
  } else if (h < 5) {
    r = x, b = c;
  } else {
    r = c, b = x;
  }
  const double m = lightness - c / 2.0;
  const auto to_byte = [m](double v) {
    return static_cast<int>(std::lround(std::clamp((v + m) * 255.0, 0.0, 255.0)));
  };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", to_byte(r), to_byte(g), to_byte(b));
  return buf;
}

std::string hsl_css(double hue) { return hsl_to_hex(hue, 0.70, 0.50); }

}  // namespace gazegram
