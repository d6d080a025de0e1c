#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

namespace surftrack {

// 8-bit image content widened to double; samples stay in [0, 255].
// Pixel (x, y) is a point sample at continuous position (x, y).
struct ImageRGB {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // row-major, 3 samples per pixel

  ImageRGB() = default;
  ImageRGB(int w, int h, const Eigen::Vector3d& fill = Eigen::Vector3d::Zero());

  bool empty() const { return data.empty(); }
  bool contains(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  Eigen::Vector3d rgb(int x, int y) const {
    const double* p = &data[(size_t(y) * width + x) * 3];
    return {p[0], p[1], p[2]};
  }
  void set_rgb(int x, int y, const Eigen::Vector3d& c) {
    double* p = &data[(size_t(y) * width + x) * 3];
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
  }
};

struct ImageGray {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  ImageGray() = default;
  ImageGray(int w, int h, double fill = 0.0);

  double at(int x, int y) const { return data[size_t(y) * width + x]; }
  double& at(int x, int y) { return data[size_t(y) * width + x]; }
};

// Rec. 601 luminance: 0.299 R + 0.587 G + 0.114 B.
ImageGray to_grayscale(const ImageRGB& img);

// Separable Gaussian convolution, kernel truncated at +/- 3 sigma and
// normalized to unit sum; borders clamped. sigma must be > 0.
ImageRGB gaussian_smooth(const ImageRGB& img, double sigma);
ImageGray gaussian_smooth(const ImageGray& img, double sigma);

struct BilinearSample {
  Eigen::Vector3d rgb = Eigen::Vector3d::Zero();
  // d(rgb)/d(x,y) of the bilinear surface at the sample point.
  Eigen::Matrix<double, 3, 2> gradient = Eigen::Matrix<double, 3, 2>::Zero();
  bool in_view = false;
};

// Bilinear interpolation of the four neighbors. Points outside
// [0, w-1] x [0, h-1] come back with in_view = false; that is a normal
// outcome, not an error.
BilinearSample sample_bilinear(const ImageRGB& img, const Eigen::Vector2d& p);

}  // namespace surftrack
