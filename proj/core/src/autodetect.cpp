#include "gazegram/autodetect.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gazegram/errors.hpp"

namespace gazegram {
namespace {

int channel(const Rgb& c, int ch) { return ch == 0 ? c.r : ch == 1 ? c.g : c.b; }

struct ChannelRange {
  int channel = 0;
  int extent = 0;
};

ChannelRange widest_channel(const std::vector<Rgb>& box) {
  ChannelRange best{0, -1};
  for (int ch = 0; ch < 3; ++ch) {
    int lo = 255;
    int hi = 0;
    for (const auto& c : box) {
      lo = std::min(lo, channel(c, ch));
      hi = std::max(hi, channel(c, ch));
    }
    // Strict comparison keeps R before G before B on ties.
    if (hi - lo > best.extent) best = {ch, hi - lo};
  }
  return best;
}

Rgb box_mean(const std::vector<Rgb>& box) {
  std::uint64_t r = 0, g = 0, b = 0;
  for (const auto& c : box) {
    r += c.r;
    g += c.g;
    b += c.b;
  }
  const auto n = static_cast<std::uint64_t>(box.size());
  return {static_cast<std::uint8_t>((r + n / 2) / n),
          static_cast<std::uint8_t>((g + n / 2) / n),
          static_cast<std::uint8_t>((b + n / 2) / n)};
}

int squared_distance(const Rgb& a, const Rgb& b) {
  const int dr = a.r - b.r;
  const int dg = a.g - b.g;
  const int db = a.b - b.b;
  return dr * dr + dg * dg + db * db;
}

constexpr std::array<std::array<int, 2>, 8> kOffsets{{
    {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}}};

bool is_diagonal(int n) { return n == kNW || n == kNE || n == kSE || n == kSW; }

// Diagonal neighbour and its two orthogonally adjacent neighbours.
constexpr std::array<std::array<int, 3>, 4> kCornerArcs{{
    {kNW, kN, kW}, {kNE, kN, kE}, {kSE, kS, kE}, {kSW, kS, kW}}};

}  // namespace

void validate(const DetectionParams& params) {
  if (params.cell_size < 1) {
    throw ArgumentError("cell size must be >= 1 (got " +
                        std::to_string(params.cell_size) + ")");
  }
  if (params.colors < 2 || params.colors > 255) {
    throw ArgumentError("colour count must be in [2, 255] (got " +
                        std::to_string(params.colors) + ")");
  }
}

std::size_t CellGrid::blank_count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), kBlankCell));
}

std::vector<Rgb> median_cut(const std::vector<Rgb>& samples, int colors) {
  if (samples.empty() || colors < 1) return {};
  std::vector<std::vector<Rgb>> boxes{samples};
  while (static_cast<int>(boxes.size()) < colors) {
    std::size_t target = boxes.size();
    ChannelRange target_range{0, 0};
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const auto range = widest_channel(boxes[i]);
      if (range.extent > target_range.extent) {
        target = i;
        target_range = range;
      }
    }
    if (target == boxes.size()) break;  // every box is a single colour

    auto box = std::move(boxes[target]);
    const int ch = target_range.channel;
    std::sort(box.begin(), box.end(), [ch](const Rgb& a, const Rgb& b) {
      const int ka = channel(a, ch);
      const int kb = channel(b, ch);
      if (ka != kb) return ka < kb;
      return std::tie(a.r, a.g, a.b) < std::tie(b.r, b.g, b.b);
    });
    const std::size_t median = box.size() / 2;
    const int pivot = channel(box[median], ch);
    const auto by_channel = [ch](const Rgb& c, int v) { return channel(c, ch) < v; };
    const auto lower = static_cast<std::size_t>(
        std::lower_bound(box.begin(), box.end(), pivot, by_channel) - box.begin());
    const auto upper = static_cast<std::size_t>(
        std::upper_bound(box.begin(), box.end(), pivot,
                         [ch](int v, const Rgb& c) { return v < channel(c, ch); }) -
        box.begin());
    std::size_t split = 0;
    const bool lower_ok = lower > 0;
    const bool upper_ok = upper < box.size();
    if (lower_ok && upper_ok) {
      split = (median - lower <= upper - median) ? lower : upper;
    } else {
      split = lower_ok ? lower : upper;
    }
    std::vector<Rgb> left(box.begin(), box.begin() + static_cast<std::ptrdiff_t>(split));
    std::vector<Rgb> right(box.begin() + static_cast<std::ptrdiff_t>(split), box.end());
    boxes[target] = std::move(left);
    boxes.insert(boxes.begin() + static_cast<std::ptrdiff_t>(target) + 1, std::move(right));
  }
  std::vector<Rgb> palette;
  palette.reserve(boxes.size());
  for (const auto& b : boxes) palette.push_back(box_mean(b));
  return palette;
}

CellGrid mosaic_and_quantize(const RgbImage& stimulus, const DetectionParams& params) {
  validate(params);
  const int z = params.cell_size;
  CellGrid grid;
  grid.cols = std::max(1, (stimulus.width + z - 1) / z);
  grid.rows = std::max(1, (stimulus.height + z - 1) / z);
  const std::size_t n = static_cast<std::size_t>(grid.cols) * grid.rows;

  std::vector<Rgb> means(n, Rgb{255, 255, 255});
  std::vector<std::int64_t> weight(n, 0);
  for (int row = 0; row < grid.rows; ++row) {
    for (int col = 0; col < grid.cols; ++col) {
      std::uint64_t r = 0, g = 0, b = 0, count = 0;
      const int y1 = std::min(stimulus.height, (row + 1) * z);
      const int x1 = std::min(stimulus.width, (col + 1) * z);
      for (int y = row * z; y < y1; ++y) {
        for (int x = col * z; x < x1; ++x) {
          const auto* p = stimulus.at(x, y);
          r += p[0];
          g += p[1];
          b += p[2];
          ++count;
        }
      }
      const std::size_t idx = static_cast<std::size_t>(row) * grid.cols + col;
      weight[idx] = static_cast<std::int64_t>(count);
      if (count > 0) {
        means[idx] = {static_cast<std::uint8_t>((r + count / 2) / count),
                      static_cast<std::uint8_t>((g + count / 2) / count),
                      static_cast<std::uint8_t>((b + count / 2) / count)};
      }
    }
  }

  const auto palette = median_cut(means, params.colors);
  std::vector<std::size_t> nearest(n, 0);
  std::vector<std::int64_t> coverage(palette.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    int best_d = squared_distance(means[i], palette[0]);
    for (std::size_t p = 1; p < palette.size(); ++p) {
      const int d = squared_distance(means[i], palette[p]);
      if (d < best_d) {
        best = p;
        best_d = d;
      }
    }
    nearest[i] = best;
    coverage[best] += weight[i];
  }

  // The colour covering the most pixels becomes the blank label 0.
  const auto blank = static_cast<std::size_t>(
      std::max_element(coverage.begin(), coverage.end()) - coverage.begin());
  std::vector<CellLabel> relabel(palette.size(), 0);
  grid.palette.push_back(palette[blank]);
  for (std::size_t p = 0; p < palette.size(); ++p) {
    if (p == blank) continue;
    relabel[p] = static_cast<CellLabel>(grid.palette.size());
    grid.palette.push_back(palette[p]);
  }
  grid.cells.resize(n);
  for (std::size_t i = 0; i < n; ++i) grid.cells[i] = relabel[nearest[i]];
  return grid;
}

std::optional<CellLabel> fill_decision(const Neighbourhood& around) {
  std::optional<CellLabel> chosen;
  int chosen_count = 0;
  for (int i = 0; i < 8; ++i) {
    const CellLabel c = around[i];
    if (c == kBlankCell) continue;
    int count = 0;
    int diagonal = 0;
    for (int j = 0; j < 8; ++j) {
      if (around[j] != c) continue;
      ++count;
      if (is_diagonal(j)) ++diagonal;
    }
    const bool cond_a = count >= 5 && diagonal >= 2;
    const bool cond_b = std::any_of(kCornerArcs.begin(), kCornerArcs.end(), [&](const auto& arc) {
      return around[arc[0]] == c && around[arc[1]] == c && around[arc[2]] == c;
    });
    if (!cond_a && !cond_b) continue;
    if (!chosen || count > chosen_count || (count == chosen_count && c < *chosen)) {
      chosen = c;
      chosen_count = count;
    }
  }
  return chosen;
}

CellGrid fill_pass(const CellGrid& grid) {
  CellGrid out = grid;
  for (int row = 0; row < out.rows; ++row) {
    for (int col = 0; col < out.cols; ++col) {
      if (out.at(col, row) != kBlankCell) continue;
      Neighbourhood around{};
      for (int i = 0; i < 8; ++i) {
        const int c = col + kOffsets[i][0];
        const int r = row + kOffsets[i][1];
        around[i] = out.inside(c, r) ? out.at(c, r) : kBlankCell;
      }
      if (auto paint = fill_decision(around)) out.at(col, row) = *paint;
    }
  }
  return out;
}

CellGrid fill_to_fixpoint(const CellGrid& grid) {
  CellGrid current = grid;
  const std::size_t limit = current.cells.size() + 1;
  for (std::size_t pass = 0; pass < limit; ++pass) {
    CellGrid next = fill_pass(current);
    if (next.cells == current.cells) break;
    current = std::move(next);
  }
  return current;
}

std::vector<CandidateRect> fit_rectangles(const CellGrid& grid) {
  std::vector<CandidateRect> out;
  const auto same = [&](int col, int row, CellLabel c) {
    return grid.inside(col, row) && grid.at(col, row) == c;
  };
  for (int row = 0; row < grid.rows; ++row) {
    for (int col = 0; col < grid.cols; ++col) {
      const CellLabel c = grid.at(col, row);
      if (c == kBlankCell) continue;
      const bool n = same(col, row - 1, c);
      const bool s = same(col, row + 1, c);
      const bool w = same(col - 1, row, c);
      const bool e = same(col + 1, row, c);

      // Horizontal and vertical directions to grow from this corner.
      int dx = 0;
      int dy = 0;
      if (!n && !w) {
        dx = 1, dy = 1;
      } else if (!n && !e) {
        dx = -1, dy = 1;
      } else if (!s && !e) {
        dx = -1, dy = -1;
      } else if (!s && !w) {
        dx = 1, dy = -1;
      } else {
        continue;
      }
      int end_col = col;
      while (same(end_col + dx, row, c)) end_col += dx;
      int end_row = row;
      while (same(col, end_row + dy, c)) end_row += dy;
      const int x0 = std::min(col, end_col);
      const int y0 = std::min(row, end_row);
      out.push_back({Rect{x0, y0, std::abs(end_col - col) + 1, std::abs(end_row - row) + 1},
                     col, row});
    }
  }
  return out;
}

bool adjoining_or_overlapping(const Rect& a, const Rect& b) {
  const Rect grown{a.x - 1, a.y - 1, a.w + 2, a.h + 2};
  return grown.intersects(b);
}

std::vector<Rect> arrange_cells(const std::vector<CandidateRect>& candidates) {
  std::vector<Rect> rects;
  for (const auto& c : candidates) {
    if (std::find(rects.begin(), rects.end(), c.rect) == rects.end()) {
      rects.push_back(c.rect);
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rects.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < rects.size() && !changed; ++j) {
        if (!adjoining_or_overlapping(rects[i], rects[j])) continue;
        const Rect merged = bounding_box(rects[i], rects[j]);
        bool swallows_third = false;
        for (std::size_t k = 0; k < rects.size(); ++k) {
          if (k != i && k != j && merged.intersects(rects[k])) {
            swallows_third = true;
            break;
          }
        }
        if (!swallows_third) {
          rects[i] = merged;
          rects.erase(rects.begin() + static_cast<std::ptrdiff_t>(j));
        } else if (rects[i].area() < rects[j].area()) {
          rects.erase(rects.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
          rects.erase(rects.begin() + static_cast<std::ptrdiff_t>(j));
        }
        changed = true;
      }
    }
  }
  return rects;
}

std::vector<Rect> arrange(const std::vector<CandidateRect>& candidates, int cell_size,
                          int width, int height) {
  std::vector<Rect> out;
  const Rect canvas{0, 0, width, height};
  for (const auto& r : arrange_cells(candidates)) {
    const Rect px = intersection(
        Rect{r.x * cell_size, r.y * cell_size, r.w * cell_size, r.h * cell_size}, canvas);
    if (!px.empty()) out.push_back(px);
  }
  return out;
}

DetectionResult detect_aois_detailed(const RgbImage& stimulus, const DetectionParams& params) {
  DetectionResult result;
  result.quantized = mosaic_and_quantize(stimulus, params);
  result.filled = fill_to_fixpoint(result.quantized);
  result.candidates = fit_rectangles(result.filled);
  result.rects = arrange(result.candidates, params.cell_size, stimulus.width, stimulus.height);
  std::sort(result.rects.begin(), result.rects.end(), [](const Rect& a, const Rect& b) {
    return std::tie(a.y, a.x) < std::tie(b.y, b.x);
  });
  result.tree = AoiTree::from_rects(result.rects);
  return result;
}

AoiTree detect_aois(const RgbImage& stimulus, const DetectionParams& params) {
  return detect_aois_detailed(stimulus, params).tree;
}

namespace {

void outline(RgbImage& img, const Rect& r, Rgb color) {
  const Rect c = intersection(r, Rect{0, 0, img.width, img.height});
  if (c.empty()) return;
  img.fill_rect({c.x, c.y, c.w, 1}, color.r, color.g, color.b);
  img.fill_rect({c.x, c.bottom() - 1, c.w, 1}, color.r, color.g, color.b);
  img.fill_rect({c.x, c.y, 1, c.h}, color.r, color.g, color.b);
  img.fill_rect({c.right() - 1, c.y, 1, c.h}, color.r, color.g, color.b);
}

}  // namespace

RgbImage render_detection_debug(const DetectionResult& result, const DetectionParams& params,
                                int width, int height) {
  RgbImage img(width, height);
  const int z = params.cell_size;
  const auto& grid = result.filled;
  for (int row = 0; row < grid.rows; ++row) {
    for (int col = 0; col < grid.cols; ++col) {
      const Rgb c = grid.palette[grid.at(col, row)];
      img.fill_rect({col * z, row * z, z, z}, c.r, c.g, c.b);
    }
  }
  for (const auto& cand : result.candidates) {
    outline(img, {cand.rect.x * z, cand.rect.y * z, cand.rect.w * z, cand.rect.h * z},
            {255, 0, 0});
  }
  for (const auto& r : result.rects) outline(img, r, {0, 200, 0});
  return img;
}

}  // namespace gazegram
