#include "fixtures.hpp"

#include <algorithm>
#include <array>

using namespace gazegram;

namespace fixtures {

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

namespace {

std::vector<AoiNode> random_children(Rng& rng, int leaves, int depth_left) {
  std::vector<AoiNode> out;
  while (leaves > 0) {
    const int part = uniform_int(rng, 1, std::min(leaves, 4));
    leaves -= part;
    if (depth_left > 1 && uniform_int(rng, 0, 9) < 4) {
      AoiNode group;
      group.kind = NodeKind::group;
      group.children = random_children(rng, part, depth_left - 1);
      out.push_back(std::move(group));
    } else {
      for (int i = 0; i < part; ++i) out.push_back(AoiNode{});
    }
  }
  return out;
}

void number_nodes(Rng& rng, AoiNode& node, int& next_id, int& next_leaf) {
  node.id = next_id++;
  if (node.is_leaf()) {
    const int i = next_leaf++;
    node.symbol = aoi_alphabet()[static_cast<std::size_t>(i)];
    node.label = "AOI " + std::to_string(i + 1);
    node.rect = Rect{(i % 8) * 100 + 10, (i / 8) * 100 + 10, uniform_int(rng, 20, 80),
                     uniform_int(rng, 20, 80)};
    return;
  }
  node.label = "G" + std::to_string(node.id);
  for (auto& c : node.children) number_nodes(rng, c, next_id, next_leaf);
}

}  // namespace

AoiTree random_tree(Rng& rng, int leaves, int max_depth) {
  AoiNode root;
  root.kind = NodeKind::group;
  root.children = random_children(rng, leaves, max_depth);
  int next_id = 0;
  int next_leaf = 0;
  number_nodes(rng, root, next_id, next_leaf);
  return normalized(AoiTree(std::move(root)));
}

AoiTree nested_example_tree() {
  const std::vector<Rect> rects{{0, 0, 100, 100},   {200, 0, 100, 100}, {0, 200, 50, 50},
                                {100, 200, 150, 150}, {400, 0, 60, 60}};
  const std::vector<std::string> labels{"A1", "A2", "A3", "A4", "A5"};
  AoiTree tree = AoiTree::from_rects(rects, labels);
  const std::array<int, 2> g1{3, 4};
  tree = make_group(tree, g1, "G1");
  const int g1_id = tree.next_id() - 1;
  const std::array<int, 2> g2{2, g1_id};
  return make_group(tree, g2, "G2");
}

RectImage random_rect_image(Rng& rng, int count, int width, int height, int min_gap) {
  static constexpr std::array<std::array<std::uint8_t, 3>, 8> kColors{{{120, 0, 0},
                                                                        {0, 90, 0},
                                                                        {0, 0, 120},
                                                                        {90, 0, 90},
                                                                        {0, 80, 80},
                                                                        {60, 60, 0},
                                                                        {20, 20, 20},
                                                                        {100, 40, 0}}};
  const auto separated = [min_gap](const Rect& a, const Rect& b) {
    const int gap_x = std::max(a.x - b.right(), b.x - a.right());
    const int gap_y = std::max(a.y - b.bottom(), b.y - a.bottom());
    return gap_x > min_gap || gap_y > min_gap;
  };

  RectImage out{RgbImage(width, height), {}};
  while (static_cast<int>(out.truth.size()) < count) {
    const int w = uniform_int(rng, 40, 260);
    const int h = uniform_int(rng, 40, 220);
    const Rect r{uniform_int(rng, min_gap, width - w - min_gap),
                 uniform_int(rng, min_gap, height - h - min_gap), w, h};
    if (std::all_of(out.truth.begin(), out.truth.end(),
                    [&](const Rect& o) { return separated(r, o); })) {
      out.truth.push_back(r);
    }
  }
  for (const auto& r : out.truth) {
    const auto& c = kColors[static_cast<std::size_t>(uniform_int(rng, 0, 7))];
    out.image.fill_rect(r, c[0], c[1], c[2]);
  }
  std::sort(out.truth.begin(), out.truth.end(),
            [](const Rect& a, const Rect& b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  return out;
}

PlantedStimulus planted_stimulus() {
  PlantedStimulus s;
  s.aois = {{50, 50, 250, 200}, {550, 80, 280, 220}, {250, 350, 300, 200}};
  return s;
}

ScanPath planted_path(const std::string& participant, std::uint64_t seed, double detour,
                      int episodes) {
  Rng rng(seed);
  const auto stim = planted_stimulus();
  ScanPath path{participant, {}};
  std::int64_t t = 0;

  const auto sample_in = [&](const Rect& r, int samples) {
    for (int i = 0; i < samples; ++i) {
      path.points.push_back(
          {uniform_real(rng, r.x + 1.0, r.right() - 1.0), uniform_real(rng, r.y + 1.0, r.bottom() - 1.0), t++});
    }
  };
  const Rect blank_strip{0, 0, 40, stim.height};
  const auto dwell = [&](int aoi) {
    sample_in(stim.aois[static_cast<std::size_t>(aoi)], uniform_int(rng, 10, 40));
    const int noise = uniform_int(rng, 0, 9);
    if (noise < 3) {
      sample_in(blank_strip, uniform_int(rng, 2, 5));
    } else if (noise < 5) {
      const int other = (aoi + uniform_int(rng, 1, 2)) % 3;
      sample_in(stim.aois[static_cast<std::size_t>(other)], uniform_int(rng, 1, 3));
    }
  };

  for (int e = 0; e < episodes; ++e) {
    dwell(0);
    dwell(1);
    dwell(2);
    if (uniform_real(rng, 0.0, 1.0) < detour) dwell(1);
  }
  return path;
}

}  // namespace fixtures
