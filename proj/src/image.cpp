#include "surftrack/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "surftrack/parallel.hpp"

namespace surftrack {

ImageRGB::ImageRGB(int w, int h, const Eigen::Vector3d& fill)
    : width(w), height(h), data(size_t(w) * h * 3) {
  for (size_t i = 0; i < data.size(); i += 3) {
    data[i] = fill[0];
    data[i + 1] = fill[1];
    data[i + 2] = fill[2];
  }
}

ImageGray::ImageGray(int w, int h, double fill)
    : width(w), height(h), data(size_t(w) * h, fill) {}

ImageGray to_grayscale(const ImageRGB& img) {
  ImageGray out(img.width, img.height);
  parallel_for(0, img.height, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < img.width; ++x) {
        const double* p = &img.data[(size_t(y) * img.width + x) * 3];
        out.at(x, y) = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
      }
  });
  return out;
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_smooth: sigma must be > 0");
  const int radius = std::max(1, (int)std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (double(i) * i) / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

// One separable pass over `channels`-interleaved samples, borders clamped.
void convolve_axis(const std::vector<double>& src, std::vector<double>* dst,
                   int width, int height, int channels,
                   const std::vector<double>& kernel, bool horizontal) {
  const int radius = ((int)kernel.size() - 1) / 2;
  parallel_for(0, height, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < width; ++x)
        for (int c = 0; c < channels; ++c) {
          double acc = 0.0;
          for (int t = -radius; t <= radius; ++t) {
            int sx = x, sy = y;
            if (horizontal)
              sx = std::clamp(x + t, 0, width - 1);
            else
              sy = std::clamp(y + t, 0, height - 1);
            acc += kernel[t + radius] * src[(size_t(sy) * width + sx) * channels + c];
          }
          (*dst)[(size_t(y) * width + x) * channels + c] = acc;
        }
  });
}

}  // namespace

ImageRGB gaussian_smooth(const ImageRGB& img, double sigma) {
  auto kernel = gaussian_kernel(sigma);
  ImageRGB tmp = img, out = img;
  convolve_axis(img.data, &tmp.data, img.width, img.height, 3, kernel, true);
  convolve_axis(tmp.data, &out.data, img.width, img.height, 3, kernel, false);
  return out;
}

ImageGray gaussian_smooth(const ImageGray& img, double sigma) {
  auto kernel = gaussian_kernel(sigma);
  ImageGray tmp = img, out = img;
  convolve_axis(img.data, &tmp.data, img.width, img.height, 1, kernel, true);
  convolve_axis(tmp.data, &out.data, img.width, img.height, 1, kernel, false);
  return out;
}

BilinearSample sample_bilinear(const ImageRGB& img, const Eigen::Vector2d& p) {
  BilinearSample s;
  const double xmax = img.width - 1.0, ymax = img.height - 1.0;
  if (!(p.x() >= 0.0 && p.x() <= xmax && p.y() >= 0.0 && p.y() <= ymax)) return s;
  s.in_view = true;

  int x0 = std::min((int)std::floor(p.x()), img.width - 2);
  int y0 = std::min((int)std::floor(p.y()), img.height - 2);
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const double fx = p.x() - x0, fy = p.y() - y0;

  const Eigen::Vector3d c00 = img.rgb(x0, y0), c10 = img.rgb(x1, y0);
  const Eigen::Vector3d c01 = img.rgb(x0, y1), c11 = img.rgb(x1, y1);
  s.rgb = (1 - fx) * (1 - fy) * c00 + fx * (1 - fy) * c10 +
          (1 - fx) * fy * c01 + fx * fy * c11;
  s.gradient.col(0) = (1 - fy) * (c10 - c00) + fy * (c11 - c01);
  s.gradient.col(1) = (1 - fx) * (c01 - c00) + fx * (c11 - c10);
  return s;
}

}  // namespace surftrack
