#include "gazegram/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "gazegram/color.hpp"
#include "gazegram/io.hpp"

namespace gazegram {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const AoiTree& tree, Level level, const TransitionGraph& graph,
                       const SvgOptions& options) {
  const auto cut = tree.leaf_count() > 0 ? cut_at_level(tree, level) : std::vector<CutEntry>{};
  int width = options.width;
  int height = options.height;
  if (options.stimulus) {
    width = width > 0 ? width : options.stimulus->width;
    height = height > 0 ? height : options.stimulus->height;
  }
  if (width <= 0 || height <= 0) {
    for (const auto& e : cut) {
      width = std::max(width, e.bounds.right());
      height = std::max(height, e.bounds.bottom());
    }
    width = std::max(width, 1);
    height = std::max(height, 1);
  }

  const auto colors = assign_hues(tree);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" "
         "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\">"
         "<polygon points=\"0,0 10,5 0,10\" fill=\"context-stroke\"/></marker></defs>\n";

  if (options.stimulus) {
    svg << "<image x=\"0\" y=\"0\" width=\"" << options.stimulus->width << "\" height=\""
        << options.stimulus->height << "\" href=\"data:image/png;base64,"
        << base64_encode(encode_png(*options.stimulus)) << "\"/>\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"#ffffff\" fill-opacity=\"" << num(options.whiten) << "\"/>\n";
  } else {
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"#ffffff\"/>\n";
  }

  svg << "<g class=\"aois\">\n";
  for (const auto& e : cut) {
    const auto color = hsl_css(colors.hue_of(e.id));
    const Rect& r = e.bounds;
    svg << "<rect x=\"" << r.x << "\" y=\"" << r.y << "\" width=\"" << r.w << "\" height=\""
        << r.h << "\" fill=\"" << color << "\" fill-opacity=\"0.35\" stroke=\"" << color
        << "\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << r.x + 3 << "\" y=\"" << r.bottom() - 4
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#202020\">"
        << escape_xml(std::to_string(e.id) + ":" + std::string(1, e.symbol)) << "</text>\n";
  }
  svg << "</g>\n";

  double max_weight = 0.0;
  for (const auto& e : graph.edges) max_weight = std::max(max_weight, e.weight);
  svg << "<g class=\"edges\" fill=\"none\">\n";
  for (const auto& e : graph.edges) {
    const auto& a = graph.nodes[static_cast<std::size_t>(e.from)].position;
    const auto& b = graph.nodes[static_cast<std::size_t>(e.to)].position;
    svg << "<path d=\"M " << num(a.x) << ' ' << num(a.y) << " L " << num(b.x) << ' ' << num(b.y)
        << "\" stroke=\"" << edge_color(e, max_weight) << "\" stroke-width=\""
        << (e.highlighted ? "4" : "2") << "\" marker-end=\"url(#arrow)\"/>\n";
  }
  svg << "</g>\n";

  svg << "<g class=\"nodes\">\n";
  for (const auto& n : graph.nodes) {
    svg << "<circle cx=\"" << num(n.position.x) << "\" cy=\"" << num(n.position.y)
        << "\" r=\"5\" fill=\"" << role_color(n.role) << "\" stroke=\"#ffffff\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace gazegram
