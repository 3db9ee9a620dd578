#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gazegram {

/// Axis-aligned rectangle in pixel (or cell) coordinates. Containment is
/// half-open: [x, x + w) x [y, y + h).
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }
  bool empty() const { return w <= 0 || h <= 0; }

  bool contains(double px, double py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }
  bool strictly_contains(double px, double py) const {
    return px > x && px < right() && py > y && py < bottom();
  }
  bool intersects(const Rect& o) const {
    return x < o.right() && o.x < right() && y < o.bottom() && o.y < bottom();
  }
  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

Rect bounding_box(const Rect& a, const Rect& b);
Rect intersection(const Rect& a, const Rect& b);

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// One gaze sample in stimulus coordinates; `t` is the sample index.
struct GazePoint {
  double x = 0.0;
  double y = 0.0;
  std::int64_t t = 0;
};

struct ScanPath {
  std::string participant;
  std::vector<GazePoint> points;
};

/// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(int w, int h, std::uint8_t r = 255, std::uint8_t g = 255,
           std::uint8_t b = 255);

  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  std::uint8_t* at(int x, int y) {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  void fill_rect(const Rect& r, std::uint8_t red, std::uint8_t green,
                 std::uint8_t blue);
};

using Stimulus = RgbImage;

/// Clamps every sample into [0, width) x [0, height).
void clamp_to_stimulus(ScanPath& path, int width, int height);

}  // namespace gazegram
