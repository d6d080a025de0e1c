#pragma once

#include <Eigen/Core>
#include <vector>

#include "surftrack/image.hpp"

namespace surftrack {

struct HogParams {
  int bins = 36;                 // 10 degree angular resolution
  int window = 8;                // half-width of the square neighborhood
  double mag_threshold = 10.0;   // gray-levels per pixel
  int freq_threshold = 16;       // minimum count for a dominant direction
  int stride = 4;                // orientation-field grid spacing
  double presmooth_sigma = 1.0;  // blur before gradients; 0 disables
};

// Angular histogram of gradient directions; counts are magnitude-independent.
struct HogHistogram {
  std::vector<int> counts;

  int bins() const { return (int)counts.size(); }
  double bin_width() const { return 360.0 / bins(); }
  int total() const;
};

struct PixelRect {
  int x0, y0, x1, y1;  // inclusive
};

// Counts central-difference gradient angles over `rect` (clipped to pixels
// with full difference support) whose magnitude exceeds mag_threshold.
// Angles follow atan2(gy, gx) in degrees within [0, 360).
HogHistogram hog_over_rect(const ImageGray& img, const PixelRect& rect,
                           int bins, double mag_threshold);

// Square neighborhood of half-width `window` centered at (cx, cy).
HogHistogram hog_at(const ImageGray& img, int cx, int cy, int window,
                    int bins, double mag_threshold);

// Unit vector of the argmax bin's center angle, or (0,0) when the highest
// count is below freq_threshold. Ties resolve to the lower bin index.
Eigen::Vector2d dominant_direction(const HogHistogram& h, int freq_threshold);

// Per-pixel dominant frame gradient; each entry is a unit vector or
// exactly (0,0) where no line pattern was detected.
struct OrientationField {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // 2 samples per pixel

  OrientationField() = default;
  OrientationField(int w, int h)
      : width(w), height(h), data(size_t(w) * h * 2, 0.0) {}

  bool contains(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  Eigen::Vector2d dir(int x, int y) const {
    const double* p = &data[(size_t(y) * width + x) * 2];
    return {p[0], p[1]};
  }
  void set_dir(int x, int y, const Eigen::Vector2d& d) {
    double* p = &data[(size_t(y) * width + x) * 2];
    p[0] = d.x();
    p[1] = d.y();
  }
};

// Grayscale-converts the frame, applies the optional pre-smoothing, then
// evaluates hog_at + dominant_direction on a stride grid; off-grid pixels
// copy the nearest computed sample.
OrientationField build_orientation_field(const ImageRGB& frame,
                                         const HogParams& params);

// Color-coded visualization: hue encodes the angle, black means no pattern.
ImageRGB orientation_field_to_image(const OrientationField& field);

}  // namespace surftrack
