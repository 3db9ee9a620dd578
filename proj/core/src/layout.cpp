#include "gazegram/layout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "gazegram/errors.hpp"

namespace gazegram {
namespace {

double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double clamp_axis(double v, int origin, int extent) {
  if (extent <= 2) return origin + extent / 2.0;
  return std::clamp(v, origin + 1.0, origin + extent - 1.0);
}

double orientation(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

}  // namespace

const char* role_name(NodeRole role) {
  switch (role) {
    case NodeRole::start:
      return "start";
    case NodeRole::end:
      return "end";
    case NodeRole::intermediate:
      break;
  }
  return "intermediate";
}

const char* role_color(NodeRole role) {
  switch (role) {
    case NodeRole::start:
      return "#e02020";
    case NodeRole::end:
      return "#2050e0";
    case NodeRole::intermediate:
      break;
  }
  return "#808080";
}

void validate(const LayoutParams& params) {
  if (params.iterations < 0) throw ArgumentError("iterations must be >= 0");
  if (!(params.time_step > 0.0)) throw ArgumentError("time step must be > 0");
  if (params.spring < 0.0 || params.repulsion < 0.0 || params.center < 0.0) {
    throw ArgumentError("force constants must be >= 0");
  }
}

std::string edge_color(const GraphEdge& edge, double max_weight) {
  if (edge.cross_group) return "#ffdd00";
  const double strength = max_weight > 0.0 ? std::clamp(edge.weight / max_weight, 0.0, 1.0) : 1.0;
  const int level = static_cast<int>(std::lround(200.0 * (1.0 - strength)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", level, level, level);
  return buf;
}

TransitionGraph build_graph(std::span<const SelectedPattern> patterns,
                            std::span<const CutEntry> cut, std::uint64_t seed) {
  std::map<char, const CutEntry*> by_symbol;
  for (const auto& e : cut) by_symbol[e.symbol] = &e;

  std::mt19937_64 rng(seed);
  TransitionGraph graph;
  for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
    const auto& chars = patterns[pi].chars;
    int previous = -1;
    const CutEntry* previous_aoi = nullptr;
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const auto it = by_symbol.find(chars[i]);
      if (it == by_symbol.end()) {
        throw ConsistencyError(std::string("pattern '") + chars + "' uses symbol '" + chars[i] +
                               "' with no visible AOI at this level");
      }
      const CutEntry& aoi = *it->second;
      GraphNode node;
      node.id = static_cast<int>(graph.nodes.size());
      node.aoi = aoi.id;
      node.symbol = aoi.symbol;
      node.home = aoi.home;
      node.role = i == 0 ? NodeRole::start
                  : i + 1 == chars.size() ? NodeRole::end
                                          : NodeRole::intermediate;
      const double amplitude = 0.05 * std::min(aoi.home.w, aoi.home.h);
      const double jx = (2.0 * unit_interval(rng) - 1.0) * amplitude;
      const double jy = (2.0 * unit_interval(rng) - 1.0) * amplitude;
      node.position = clamp_inside({aoi.home.center_x() + jx, aoi.home.center_y() + jy}, aoi.home);
      graph.nodes.push_back(node);

      if (previous >= 0) {
        GraphEdge edge;
        edge.from = previous;
        edge.to = node.id;
        edge.weight = patterns[pi].weight;
        edge.pattern = static_cast<int>(pi);
        edge.cross_group = previous_aoi->top_level_id != aoi.top_level_id &&
                           (previous_aoi->top_level_is_group || aoi.top_level_is_group);
        graph.edges.push_back(edge);
      }
      previous = node.id;
      previous_aoi = &aoi;
    }
  }
  return graph;
}

Point clamp_inside(const Point& p, const Rect& home) {
  return {clamp_axis(p.x, home.x, home.w), clamp_axis(p.y, home.y, home.h)};
}

TransitionGraph layout_step(const TransitionGraph& graph, const LayoutParams& params) {
  const std::size_t n = graph.nodes.size();
  std::vector<Point> force(n);

  for (const auto& e : graph.edges) {
    const auto& a = graph.nodes[static_cast<std::size_t>(e.from)];
    const auto& b = graph.nodes[static_cast<std::size_t>(e.to)];
    const double dx = b.position.x - a.position.x;
    const double dy = b.position.y - a.position.y;
    const double d = std::hypot(dx, dy);
    if (d < 1e-9) continue;
    const double rest =
        0.4 * std::min({a.home.w, a.home.h, b.home.w, b.home.h});
    const double f = params.spring * (d - rest);
    force[static_cast<std::size_t>(e.from)].x += f * dx / d;
    force[static_cast<std::size_t>(e.from)].y += f * dy / d;
    force[static_cast<std::size_t>(e.to)].x -= f * dx / d;
    force[static_cast<std::size_t>(e.to)].y -= f * dy / d;
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = graph.nodes[i];
      const auto& b = graph.nodes[j];
      if (a.aoi != b.aoi) continue;
      double dx = a.position.x - b.position.x;
      double dy = a.position.y - b.position.y;
      double d = std::hypot(dx, dy);
      if (d < 1e-9) {
        // Coincident: separate along a fixed, pair-dependent direction.
        const double theta = 2.399963229728653 * static_cast<double>(i + j + 1);
        dx = std::cos(theta);
        dy = std::sin(theta);
        d = 1.0;
      }
      const double f = params.repulsion / std::max(d * d, 1.0);
      force[i].x += f * dx / d;
      force[i].y += f * dy / d;
      force[j].x -= f * dx / d;
      force[j].y -= f * dy / d;
    }
  }

  TransitionGraph out = graph;
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = out.nodes[i];
    force[i].x += params.center * (node.home.center_x() - node.position.x);
    force[i].y += params.center * (node.home.center_y() - node.position.y);
    node.position = clamp_inside({node.position.x + params.time_step * force[i].x,
                                  node.position.y + params.time_step * force[i].y},
                                 node.home);
  }
  return out;
}

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double o1 = orientation(a, b, c);
  const double o2 = orientation(a, b, d);
  const double o3 = orientation(c, d, a);
  const double o4 = orientation(c, d, b);
  return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

std::size_t count_crossings(const TransitionGraph& graph) {
  std::size_t crossings = 0;
  const auto& nodes = graph.nodes;
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const auto& e = graph.edges[i];
    for (std::size_t j = i + 1; j < graph.edges.size(); ++j) {
      const auto& f = graph.edges[j];
      if (e.from == f.from || e.from == f.to || e.to == f.from || e.to == f.to) continue;
      if (segments_cross(nodes[static_cast<std::size_t>(e.from)].position,
                         nodes[static_cast<std::size_t>(e.to)].position,
                         nodes[static_cast<std::size_t>(f.from)].position,
                         nodes[static_cast<std::size_t>(f.to)].position)) {
        ++crossings;
      }
    }
  }
  return crossings;
}

TransitionGraph swap_pass(const TransitionGraph& graph) {
  TransitionGraph g = graph;
  std::size_t current = count_crossings(g);
  bool committed = true;
  while (committed && current > 0) {
    committed = false;
    const auto& nodes = g.nodes;
    for (std::size_t i = 0; i < g.edges.size() && !committed; ++i) {
      for (std::size_t j = i + 1; j < g.edges.size() && !committed; ++j) {
        const auto& e = g.edges[i];
        const auto& f = g.edges[j];
        if (e.from == f.from || e.from == f.to || e.to == f.from || e.to == f.to) continue;
        if (!segments_cross(nodes[static_cast<std::size_t>(e.from)].position,
                            nodes[static_cast<std::size_t>(e.to)].position,
                            nodes[static_cast<std::size_t>(f.from)].position,
                            nodes[static_cast<std::size_t>(f.to)].position)) {
          continue;
        }
        for (int a : {e.from, e.to}) {
          for (int b : {f.from, f.to}) {
            if (committed) break;
            auto& na = g.nodes[static_cast<std::size_t>(a)];
            auto& nb = g.nodes[static_cast<std::size_t>(b)];
            if (na.aoi != nb.aoi) continue;
            std::swap(na.position, nb.position);
            const std::size_t trial = count_crossings(g);
            if (trial < current) {
              current = trial;
              committed = true;
            } else {
              std::swap(na.position, nb.position);
            }
          }
        }
      }
    }
  }
  return g;
}

TransitionGraph run_layout(const TransitionGraph& graph, const LayoutParams& params) {
  validate(params);
  TransitionGraph g = graph;
  for (int i = 0; i < params.iterations; ++i) g = layout_step(g, params);
  return swap_pass(g);
}

}  // namespace gazegram
