#include "surftrack/orientation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "surftrack/parallel.hpp"

namespace surftrack {

namespace {
constexpr double kRadToDeg = 180.0 / M_PI;
}

int HogHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0);
}

HogHistogram hog_over_rect(const ImageGray& img, const PixelRect& rect,
                           int bins, double mag_threshold) {
  if (bins < 4) throw std::invalid_argument("hog: bins must be >= 4");
  HogHistogram h;
  h.counts.assign(bins, 0);

  // Clip to pixels where the central difference has full support.
  const int x0 = std::max(rect.x0, 1), x1 = std::min(rect.x1, img.width - 2);
  const int y0 = std::max(rect.y0, 1), y1 = std::min(rect.y1, img.height - 2);
  const double bin_width = 360.0 / bins;

  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double gx = 0.5 * (img.at(x + 1, y) - img.at(x - 1, y));
      const double gy = 0.5 * (img.at(x, y + 1) - img.at(x, y - 1));
      if (std::hypot(gx, gy) <= mag_threshold) continue;
      double angle = std::atan2(gy, gx) * kRadToDeg;
      if (angle < 0.0) angle += 360.0;
      int bin = std::min((int)(angle / bin_width), bins - 1);
      ++h.counts[bin];
    }
  return h;
}

HogHistogram hog_at(const ImageGray& img, int cx, int cy, int window,
                    int bins, double mag_threshold) {
  if (window < 1) throw std::invalid_argument("hog_at: window must be >= 1");
  return hog_over_rect(img, {cx - window, cy - window, cx + window, cy + window},
                       bins, mag_threshold);
}

Eigen::Vector2d dominant_direction(const HogHistogram& h, int freq_threshold) {
  int best = 0;
  for (int i = 1; i < h.bins(); ++i)
    if (h.counts[i] > h.counts[best]) best = i;
  if (h.counts[best] < freq_threshold) return Eigen::Vector2d::Zero();
  const double alpha = (best + 0.5) * h.bin_width() * M_PI / 180.0;
  return {std::cos(alpha), std::sin(alpha)};
}

OrientationField build_orientation_field(const ImageRGB& frame,
                                         const HogParams& params) {
  if (params.stride < 1) throw std::invalid_argument("orientation field: stride must be >= 1");
  ImageGray gray = to_grayscale(frame);
  if (params.presmooth_sigma > 0.0)
    gray = gaussian_smooth(gray, params.presmooth_sigma);

  const int gx = (frame.width - 1) / params.stride + 1;
  const int gy = (frame.height - 1) / params.stride + 1;
  std::vector<Eigen::Vector2d> grid(size_t(gx) * gy);

  parallel_for(0, gy, [&](int r0, int r1) {
    for (int gj = r0; gj < r1; ++gj)
      for (int gi = 0; gi < gx; ++gi) {
        HogHistogram h = hog_at(gray, gi * params.stride, gj * params.stride,
                                params.window, params.bins, params.mag_threshold);
        grid[size_t(gj) * gx + gi] = dominant_direction(h, params.freq_threshold);
      }
  }, 1);

  OrientationField field(frame.width, frame.height);
  parallel_for(0, frame.height, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      const int gj = std::min((y + params.stride / 2) / params.stride, gy - 1);
      for (int x = 0; x < frame.width; ++x) {
        const int gi = std::min((x + params.stride / 2) / params.stride, gx - 1);
        field.set_dir(x, y, grid[size_t(gj) * gx + gi]);
      }
    }
  });
  return field;
}

namespace {

Eigen::Vector3d hsv_to_rgb(double h_deg, double s, double v) {
  const double c = v * s;
  const double hp = h_deg / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1)      { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else             { r = c; b = x; }
  const double m = v - c;
  return {255.0 * (r + m), 255.0 * (g + m), 255.0 * (b + m)};
}

}  // namespace

ImageRGB orientation_field_to_image(const OrientationField& field) {
  ImageRGB img(field.width, field.height);
  for (int y = 0; y < field.height; ++y)
    for (int x = 0; x < field.width; ++x) {
      const Eigen::Vector2d d = field.dir(x, y);
      if (d.isZero()) continue;  // black = no pattern
      double angle = std::atan2(d.y(), d.x()) * kRadToDeg;
      if (angle < 0.0) angle += 360.0;
      img.set_rgb(x, y, hsv_to_rgb(angle, 1.0, 1.0));
    }
  return img;
}

}  // namespace surftrack
