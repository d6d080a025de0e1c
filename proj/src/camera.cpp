#include "surftrack/camera.hpp"

#include <stdexcept>
#include <string>

namespace surftrack {

namespace {
[[noreturn]] void throw_behind_camera(double depth) {
  throw std::runtime_error("project: point behind camera, depth = " +
                           std::to_string(depth));
}
}  // namespace

Eigen::Vector2d project(const Intrinsics& K, const Eigen::Vector3d& v) {
  const double w = v.z();
  if (!(w > kDepthEpsilon)) throw_behind_camera(w);
  return {K.fx * v.x() / w + K.cx, K.fy * v.y() / w + K.cy};
}

Eigen::Matrix<double, 2, 3> project_jacobian(const Intrinsics& K,
                                             const Eigen::Vector3d& v) {
  const double w = v.z();
  if (!(w > kDepthEpsilon)) throw_behind_camera(w);
  Eigen::Matrix<double, 2, 3> J;
  J << K.fx / w, 0, -K.fx * v.x() / (w * w),
       0, K.fy / w, -K.fy * v.y() / (w * w);
  return J;
}

}  // namespace surftrack
