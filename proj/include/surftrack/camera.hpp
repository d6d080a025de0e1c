#pragma once

#include <Eigen/Core>

namespace surftrack {

// Minimum depth in front of the camera for a projection to be defined.
inline constexpr double kDepthEpsilon = 1e-6;

// Pinhole camera. The world frame equals the camera frame: camera at the
// origin, x right, y down, z forward; no lens distortion.
struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d K;
    K << fx, 0, cx, 0, fy, cy, 0, 0, 1;
    return K;
  }
};

// (u/w, v/w) with (u, v, w) = K * v. Throws if the depth v.z() is at or
// below kDepthEpsilon. The result may lie outside the image bounds.
Eigen::Vector2d project(const Intrinsics& K, const Eigen::Vector3d& v);

// 2x3 partial derivatives of project with respect to v.
Eigen::Matrix<double, 2, 3> project_jacobian(const Intrinsics& K,
                                             const Eigen::Vector3d& v);

}  // namespace surftrack
