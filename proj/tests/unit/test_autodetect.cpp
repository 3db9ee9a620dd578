#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "gazegram/autodetect.hpp"
#include "gazegram/errors.hpp"

using namespace gazegram;

namespace {

CellGrid grid_from(const std::vector<std::string>& rows) {
  CellGrid g;
  g.rows = static_cast<int>(rows.size());
  g.cols = static_cast<int>(rows.front().size());
  g.palette = {{255, 255, 255}, {200, 0, 0}, {0, 0, 200}, {0, 150, 0}};
  for (const auto& r : rows) {
    for (char c : r) g.cells.push_back(c == '.' ? 0 : static_cast<CellLabel>(c - '0'));
  }
  return g;
}

Neighbourhood hood(std::initializer_list<Neighbour> red) {
  Neighbourhood n{};
  for (auto k : red) n[k] = 1;
  return n;
}


}  // namespace

TEST_CASE("fill_decision examples") {
  CHECK(fill_decision(hood({kNE, kSE, kN, kS, kW})) == CellLabel{1});
  CHECK(fill_decision(hood({kN, kNE, kE})) == CellLabel{1});
  CHECK_FALSE(fill_decision(hood({kN, kS, kNE, kSW})).has_value());
  CHECK_FALSE(fill_decision(Neighbourhood{}).has_value());
}

TEST_CASE("fill_decision matches the A/B predicates on all 3^8 windows") {
  int mismatches = 0;
  int filled = 0;
  for (int code = 0; code < 6561; ++code) {
    Neighbourhood n{};
    int v = code;
    for (int i = 0; i < 8; ++i, v /= 3) n[i] = static_cast<CellLabel>(v % 3);
    const auto expected = oracles::fill_oracle(n);
    const auto got = fill_decision(n);
    if (expected != got) ++mismatches;
    if (got) ++filled;
  }
  CHECK(mismatches == 0);
  CHECK(filled > 0);
}

TEST_CASE("fill_pass repaints in place and is monotone") {
  auto g = grid_from({"11.", "1..", "..."});
  const auto once = fill_pass(g);
  // (1,1) sees N, NW, W as label 1 -> corner arc.
  CHECK(once.at(1, 1) == 1);
  CHECK(once.blank_count() <= g.blank_count());

  fixtures::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    CellGrid r = grid_from({"."});
    r.cols = fixtures::uniform_int(rng, 1, 12);
    r.rows = fixtures::uniform_int(rng, 1, 12);
    r.cells.assign(static_cast<std::size_t>(r.cols * r.rows), 0);
    for (auto& c : r.cells) c = static_cast<CellLabel>(fixtures::uniform_int(rng, 0, 9) < 6 ? 0 : fixtures::uniform_int(rng, 1, 3));
    auto cur = r;
    int passes = 0;
    while (true) {
      const auto next = fill_pass(cur);
      CHECK(next.blank_count() <= cur.blank_count());
      ++passes;
      if (next.cells == cur.cells) break;
      cur = next;
      REQUIRE(passes <= r.cols * r.rows);
    }
    CHECK(fill_to_fixpoint(r).cells == cur.cells);
  }
}

TEST_CASE("fit_rectangles") {
  SUBCASE("solid block yields four equal candidates") {
    const auto g = grid_from({"......", ".111..", ".111..", ".111..", ".111..", "......"});
    const auto c = fit_rectangles(g);
    REQUIRE(c.size() == 4);
    for (const auto& r : c) CHECK(r.rect == Rect{1, 1, 3, 4});
  }
  SUBCASE("single cell yields one candidate") {
    const auto c = fit_rectangles(grid_from({"...", ".2.", "..."}));
    REQUIRE(c.size() == 1);
    CHECK(c[0].rect == Rect{1, 1, 1, 1});
  }
  SUBCASE("empty grid") { CHECK(fit_rectangles(grid_from({"...", "..."})).empty()); }
  SUBCASE("L-shape against a corner and run oracle") {
    const auto g = grid_from({"1111....", "1111....", "11......", "11......", "11......", "........"});
    const auto c = fit_rectangles(g);
    const auto same = [&](int col, int row) { return g.inside(col, row) && g.at(col, row) == 1; };

    // Every convex corner cell of the region yields exactly one candidate.
    std::set<std::pair<int, int>> corners;
    for (int row = 0; row < g.rows; ++row) {
      for (int col = 0; col < g.cols; ++col) {
        if (!same(col, row)) continue;
        const bool n = same(col, row - 1), s = same(col, row + 1);
        const bool w = same(col - 1, row), e = same(col + 1, row);
        if ((!n && !w) || (!n && !e) || (!s && !e) || (!s && !w)) corners.insert({col, row});
      }
    }
    std::set<std::pair<int, int>> sources;
    for (const auto& cand : c) sources.insert({cand.corner_col, cand.corner_row});
    CHECK(sources == corners);
    CHECK(c.size() == corners.size());

    // Each candidate's sides through its corner are maximal runs of the colour.
    std::set<std::tuple<int, int, int, int>> distinct;
    for (const auto& cand : c) {
      const Rect& r = cand.rect;
      distinct.insert({r.x, r.y, r.w, r.h});
      for (int x = r.x; x < r.right(); ++x) CHECK(same(x, cand.corner_row));
      for (int y = r.y; y < r.bottom(); ++y) CHECK(same(cand.corner_col, y));
      const bool left = cand.corner_col == r.x;
      const bool top = cand.corner_row == r.y;
      CHECK_FALSE(same(left ? r.right() : r.x - 1, cand.corner_row));
      CHECK_FALSE(same(cand.corner_col, top ? r.bottom() : r.y - 1));
    }
    CHECK(distinct.size() >= 2);
    CHECK(distinct.count({0, 0, 4, 2}) == 1);
    CHECK(distinct.count({0, 0, 2, 5}) == 1);
  }
}

TEST_CASE("arrange_cells") {
  const auto cand = [](Rect r) { return CandidateRect{r, r.x, r.y}; };
  SUBCASE("disjoint rects are kept") {
    const auto out = arrange_cells({cand({0, 0, 2, 2}), cand({5, 5, 2, 2})});
    CHECK(out == std::vector<Rect>{{0, 0, 2, 2}, {5, 5, 2, 2}});
  }
  SUBCASE("overlapping pair merges into its bounding box") {
    const auto out = arrange_cells({cand({0, 0, 3, 3}), cand({2, 2, 3, 3})});
    CHECK(out == std::vector<Rect>{{0, 0, 5, 5}});
  }
  SUBCASE("merge that would swallow a third rect drops the smaller of the pair") {
    const Rect big{0, 0, 6, 2};
    const Rect tall{5, 1, 1, 8};
    const Rect third{0, 5, 2, 2};
    // Oracle: the pair's bounding box meets the third rect, so no merge.
    REQUIRE(bounding_box(big, tall).intersects(third));
    REQUIRE_FALSE(adjoining_or_overlapping(big, third));
    REQUIRE_FALSE(adjoining_or_overlapping(tall, third));
    const auto out = arrange_cells({cand(big), cand(tall), cand(third)});
    CHECK(out == std::vector<Rect>{big, third});
  }
  SUBCASE("duplicates collapse") {
    const auto out = arrange_cells({cand({1, 1, 2, 2}), cand({1, 1, 2, 2})});
    CHECK(out.size() == 1);
  }
  SUBCASE("fixpoint: random candidates never leave an adjoining pair") {
    fixtures::Rng rng(9);
    for (int t = 0; t < 200; ++t) {
      std::vector<CandidateRect> cs;
      const int n = fixtures::uniform_int(rng, 1, 10);
      for (int i = 0; i < n; ++i) {
        cs.push_back(cand({fixtures::uniform_int(rng, 0, 30), fixtures::uniform_int(rng, 0, 30),
                           fixtures::uniform_int(rng, 1, 6), fixtures::uniform_int(rng, 1, 6)}));
      }
      const auto out = arrange_cells(cs);
      for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = i + 1; j < out.size(); ++j) {
          CHECK_FALSE(adjoining_or_overlapping(out[i], out[j]));
        }
      }
    }
  }
}

TEST_CASE("adjoining includes corner contact") {
  CHECK(adjoining_or_overlapping({0, 0, 2, 2}, {2, 2, 1, 1}));
  CHECK(adjoining_or_overlapping({0, 0, 2, 2}, {2, 0, 1, 1}));
  CHECK_FALSE(adjoining_or_overlapping({0, 0, 2, 2}, {3, 0, 1, 1}));
}

TEST_CASE("arrange converts to pixels and clamps") {
  const std::vector<CandidateRect> cs{{Rect{0, 0, 2, 2}, 0, 0}, {Rect{9, 9, 3, 3}, 9, 9}};
  const auto out = arrange(cs, 8, 90, 90);
  CHECK(out[0] == Rect{0, 0, 16, 16});
  CHECK(out[1] == Rect{72, 72, 18, 18});
}

TEST_CASE("median_cut") {
  SUBCASE("splits distinct clusters") {
    std::vector<Rgb> s(10, Rgb{255, 255, 255});
    s.insert(s.end(), 3, Rgb{0, 0, 0});
    const auto p = median_cut(s, 2);
    REQUIRE(p.size() == 2);
    CHECK(std::find(p.begin(), p.end(), Rgb{0, 0, 0}) != p.end());
    CHECK(std::find(p.begin(), p.end(), Rgb{255, 255, 255}) != p.end());
  }
  SUBCASE("uniform samples give a single entry") {
    const auto p = median_cut(std::vector<Rgb>(5, Rgb{10, 20, 30}), 4);
    CHECK(p == std::vector<Rgb>{{10, 20, 30}});
  }
  SUBCASE("never more entries than requested") {
    fixtures::Rng rng(1);
    std::vector<Rgb> s;
    for (int i = 0; i < 500; ++i) {
      s.push_back({static_cast<std::uint8_t>(fixtures::uniform_int(rng, 0, 255)),
                   static_cast<std::uint8_t>(fixtures::uniform_int(rng, 0, 255)),
                   static_cast<std::uint8_t>(fixtures::uniform_int(rng, 0, 255))});
    }
    CHECK(median_cut(s, 7).size() == 7);
  }
}

TEST_CASE("mosaic_and_quantize") {
  SUBCASE("uniform white image is all blank") {
    const auto g = mosaic_and_quantize(RgbImage(64, 48), {8, 2});
    CHECK(g.cols == 8);
    CHECK(g.rows == 6);
    CHECK(g.blank_count() == g.cells.size());
  }
  SUBCASE("black square on white becomes a 4x4 item block") {
    RgbImage img(100, 100);
    img.fill_rect({20, 20, 40, 40}, 0, 0, 0);
    // Pixel-count oracle: black covers 1600 of 10000 pixels, a minority.
    std::size_t black = 0;
    for (std::size_t i = 0; i < img.pixels.size(); i += 3) black += img.pixels[i] == 0;
    REQUIRE(black * 2 < img.pixels.size() / 3);
    const auto g = mosaic_and_quantize(img, {10, 2});
    int items = 0;
    for (int r = 0; r < g.rows; ++r) {
      for (int c = 0; c < g.cols; ++c) {
        const bool inside = c >= 2 && c < 6 && r >= 2 && r < 6;
        CHECK((g.at(c, r) != kBlankCell) == inside);
        items += g.at(c, r) != kBlankCell;
      }
    }
    CHECK(items == 16);
  }
  SUBCASE("majority colour is blank") {
    RgbImage img(40, 40, 0, 0, 0);
    img.fill_rect({0, 0, 10, 10}, 255, 255, 255);
    img.fill_rect({20, 20, 10, 10}, 255, 255, 255);
    const auto g = mosaic_and_quantize(img, {10, 2});
    CHECK(g.palette[0] == Rgb{0, 0, 0});
    CHECK(g.at(0, 0) != kBlankCell);
    CHECK(g.at(1, 0) == kBlankCell);
  }
  SUBCASE("image smaller than one cell") {
    const auto g = mosaic_and_quantize(RgbImage(3, 2), {8, 4});
    CHECK(g.cols == 1);
    CHECK(g.rows == 1);
  }
  SUBCASE("invalid params") {
    CHECK_THROWS_AS(validate(DetectionParams{0, 4}), ArgumentError);
    CHECK_THROWS_AS(validate(DetectionParams{8, 1}), ArgumentError);
  }
}

TEST_CASE("detect_aois") {
  SUBCASE("three blocks on white") {
    RgbImage img(400, 300);
    const std::vector<Rect> truth{{20, 20, 100, 60}, {200, 30, 150, 90}, {60, 180, 120, 80}};
    img.fill_rect(truth[0], 200, 0, 0);
    img.fill_rect(truth[1], 0, 0, 200);
    img.fill_rect(truth[2], 0, 120, 0);
    const auto tree = detect_aois(img, {8, 4});
    REQUIRE(tree.leaf_count() == 3);
    const auto leaves = tree.leaves();
    for (std::size_t i = 0; i < 3; ++i) {
      const Rect& r = *leaves[i]->rect;
      CHECK(std::abs(r.x - truth[i].x) <= 8);
      CHECK(std::abs(r.y - truth[i].y) <= 8);
      CHECK(std::abs(r.right() - truth[i].right()) <= 8);
      CHECK(std::abs(r.bottom() - truth[i].bottom()) <= 8);
      CHECK(leaves[i]->label == "AOI " + std::to_string(i + 1));
    }
    CHECK(validate_tree(tree, Rect{0, 0, 400, 300}).empty());
  }
  SUBCASE("blank image has no leaves") { CHECK(detect_aois(RgbImage(200, 100), {8, 4}).leaf_count() == 0); }
  SUBCASE("single centred block") {
    RgbImage img(200, 200);
    img.fill_rect({70, 70, 60, 60}, 10, 10, 10);
    CHECK(detect_aois(img, {8, 4}).leaf_count() == 1);
  }
  SUBCASE("deterministic") {
    fixtures::Rng rng(4);
    const auto fx = fixtures::random_rect_image(rng, 5, 640, 480, 3 * 8);
    const auto a = detect_aois_detailed(fx.image, {8, 4});
    const auto b = detect_aois_detailed(fx.image, {8, 4});
    CHECK(a.rects == b.rects);
  }
}

TEST_CASE("debug raster marks candidates and final rects") {
  RgbImage img(100, 100);
  img.fill_rect({20, 20, 40, 40}, 0, 0, 0);
  const DetectionParams p{10, 2};
  const auto result = detect_aois_detailed(img, p);
  const auto dbg = render_detection_debug(result, p, 100, 100);
  CHECK(dbg.width == 100);
  const auto* px = dbg.at(20, 30);
  CHECK(px[0] == 0);
  CHECK(px[1] == 200);  // final rect outline drawn last
}
