#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gazegram/aoi_tree.hpp"
#include "gazegram/model.hpp"

namespace gazegram {

enum class NodeRole { start, intermediate, end };

const char* role_name(NodeRole role);
/// Fixed role colours: start red, end blue, intermediate gray.
const char* role_color(NodeRole role);

struct GraphNode {
  int id = 0;
  int aoi = 0;             // id of the visible (cut) AOI node hosting this node
  char symbol = kBlank;
  NodeRole role = NodeRole::intermediate;
  Point position;
  Rect home;               // rect of the largest leaf of the visible AOI
};

struct GraphEdge {
  int from = 0;
  int to = 0;
  double weight = 1.0;
  bool cross_group = false;
  int pattern = 0;         // index into the selection
  bool highlighted = false;
};

struct TransitionGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
};

struct LayoutParams {
  int iterations = 300;
  double spring = 0.5;
  double repulsion = 5000.0;
  double center = 1.0;
  double time_step = 0.05;
  std::uint64_t seed = 1;
};

void validate(const LayoutParams& params);

/// Edge stroke: vivid yellow across groups, otherwise a gray that darkens
/// with weight relative to `max_weight`.
std::string edge_color(const GraphEdge& edge, double max_weight);

/// A pattern chosen for display with the weight its edges carry.
struct SelectedPattern {
  std::string chars;
  double weight = 1.0;
};

/// One node chain per pattern; nodes start at their home-rect centre plus a
/// seeded jitter. An edge is cross-group when its endpoints hang under
/// different top-level nodes and at least one of those is a group. Throws
/// ConsistencyError when a symbol has no visible AOI in `cut`.
TransitionGraph build_graph(std::span<const SelectedPattern> patterns,
                            std::span<const CutEntry> cut, std::uint64_t seed);

/// Clamps into `home` keeping a 1 px margin; an axis too thin for the
/// margin snaps to the centre line.
Point clamp_inside(const Point& p, const Rect& home);

/// One explicit Euler step of spring, same-AOI repulsion and centre forces
/// followed by clamping into the home rect.
TransitionGraph layout_step(const TransitionGraph& graph, const LayoutParams& params);

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d);

/// Number of edge pairs whose segments properly cross; edges sharing a node
/// never count.
std::size_t count_crossings(const TransitionGraph& graph);

/// Swaps positions of same-AOI endpoints of crossing edges whenever that
/// strictly lowers the crossing count, until no swap helps.
TransitionGraph swap_pass(const TransitionGraph& graph);

TransitionGraph run_layout(const TransitionGraph& graph, const LayoutParams& params);

}  // namespace gazegram
