#include "gazegram/model.hpp"

#include <algorithm>
#include <cmath>

namespace gazegram {

Rect bounding_box(const Rect& a, const Rect& b) {
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  const int x1 = std::max(a.right(), b.right());
  const int y1 = std::max(a.bottom(), b.bottom());
  return {x0, y0, x1 - x0, y1 - y0};
}

Rect intersection(const Rect& a, const Rect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return {x0, y0, 0, 0};
  return {x0, y0, x1 - x0, y1 - y0};
}

RgbImage::RgbImage(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3) {
  for (std::size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = r;
    pixels[i + 1] = g;
    pixels[i + 2] = b;
  }
}

void RgbImage::fill_rect(const Rect& r, std::uint8_t red, std::uint8_t green,
                         std::uint8_t blue) {
  const Rect c = intersection(r, Rect{0, 0, width, height});
  for (int y = c.y; y < c.bottom(); ++y) {
    for (int x = c.x; x < c.right(); ++x) {
      auto* p = at(x, y);
      p[0] = red;
      p[1] = green;
      p[2] = blue;
    }
  }
}

void clamp_to_stimulus(ScanPath& path, int width, int height) {
  // Largest double strictly below the bound keeps the half-open invariant.
  const double max_x = std::nextafter(static_cast<double>(width), 0.0);
  const double max_y = std::nextafter(static_cast<double>(height), 0.0);
  for (auto& p : path.points) {
    p.x = std::clamp(p.x, 0.0, max_x);
    p.y = std::clamp(p.y, 0.0, max_y);
  }
}

}  // namespace gazegram
