#include "trisweep/camera.h"

#include <cmath>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "trisweep/error.h"
#include "trisweep/plane.h"

namespace trisweep {

Eigen::Matrix3d CameraIntrinsics::K() const {
  Eigen::Matrix3d k;
  k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  return k;
}

Eigen::Matrix3d CameraIntrinsics::KInverse() const {
  Eigen::Matrix3d k;
  k << 1.0 / fx, 0.0, -cx / fx, 0.0, 1.0 / fy, -cy / fy, 0.0, 0.0, 1.0;
  return k;
}

CameraIntrinsics CameraIntrinsics::AtLevel(int level) const {
  const double scale = std::ldexp(1.0, -level);
  CameraIntrinsics scaled = *this;
  scaled.fx = fx * scale;
  scaled.fy = fy * scale;
  scaled.cx = cx * scale;
  scaled.cy = cy * scale;
  scaled.width = LevelExtent(width, level);
  scaled.height = LevelExtent(height, level);
  return scaled;
}

void CameraIntrinsics::Validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  }
  if (!(cx > 0.0 && cx < width) || !(cy > 0.0 && cy < height)) {
    throw Error(ErrorCode::kInvalidArgument,
                "principal point must lie inside the image");
  }
}

CameraIntrinsics IntrinsicsFromFov(int width, int height, double fov_x_rad) {
  CameraIntrinsics k;
  k.width = width;
  k.height = height;
  k.fx = 0.5 * width / std::tan(0.5 * fov_x_rad);
  k.fy = k.fx;
  k.cx = 0.5 * width;
  k.cy = 0.5 * height;
  return k;
}

void CameraPose::Validate(double tolerance) const {
  const double ortho =
      (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
          .cwiseAbs()
          .maxCoeff();
  if (!(ortho <= tolerance)) {
    throw Error(ErrorCode::kInvalidArgument,
                "rotation is not orthonormal (deviation " +
                    std::to_string(ortho) + ")");
  }
  if (!(std::abs(rotation.determinant() - 1.0) <= tolerance)) {
    throw Error(ErrorCode::kInvalidArgument, "rotation determinant is not +1");
  }
  if (!translation.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "translation is not finite");
  }
  intrinsics.Validate();
}

CameraPose CameraPose::AtLevel(int level) const {
  CameraPose scaled = *this;
  scaled.intrinsics = intrinsics.AtLevel(level);
  return scaled;
}

Ray Ray::Through(const Eigen::Vector3d& origin,
                 const Eigen::Vector3d& direction) {
  const double norm = direction.norm();
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "zero ray direction");
  }
  return Ray{origin, direction / norm};
}

Projection Project(const CameraPose& pose, const Eigen::Vector3d& point) {
  const Eigen::Vector3d cam = pose.rotation * point + pose.translation;
  if (!(cam.z() > 0.0)) {
    throw Error(ErrorCode::kBehindCamera, "point is not in front of camera");
  }
  const auto& k = pose.intrinsics;
  return {{k.fx * cam.x() / cam.z() + k.cx, k.fy * cam.y() / cam.z() + k.cy},
          cam.z()};
}

Eigen::Vector3d Unproject(const CameraPose& pose, const Eigen::Vector2d& pixel,
                          double depth) {
  if (!(depth > 0.0)) {
    throw Error(ErrorCode::kNonPositiveDepth, "depth must be positive");
  }
  const auto& k = pose.intrinsics;
  const Eigen::Vector3d cam((pixel.x() - k.cx) / k.fx * depth,
                            (pixel.y() - k.cy) / k.fy * depth, depth);
  return pose.rotation.transpose() * (cam - pose.translation);
}

Eigen::Vector3d CameraCenter(const CameraPose& pose) {
  return -pose.rotation.transpose() * pose.translation;
}

Eigen::Vector3d OpticalAxis(const CameraPose& pose) {
  return pose.rotation.row(2).transpose();
}

CameraPose LookAt(const Eigen::Vector3d& center, const Eigen::Vector3d& target,
                  const Eigen::Vector3d& up,
                  const CameraIntrinsics& intrinsics) {
  const Eigen::Vector3d forward = (target - center).normalized();
  Eigen::Vector3d right = forward.cross(up);
  if (right.norm() < 1e-9) right = forward.cross(Eigen::Vector3d::UnitY());
  right.normalize();
  const Eigen::Vector3d down = forward.cross(right);

  CameraPose pose;
  pose.rotation.row(0) = right.transpose();
  pose.rotation.row(1) = down.transpose();
  pose.rotation.row(2) = forward.transpose();
  pose.translation = -pose.rotation * center;
  pose.intrinsics = intrinsics;
  return pose;
}

Eigen::Matrix3d Orthonormalize(const Eigen::Matrix3d& rotation) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

CameraPose InterpolatePose(const std::array<CameraPose, 3>& triplet,
                           const Eigen::Vector3d& bary, double forward_jitter) {
  if (bary.minCoeff() < -1e-9 || std::abs(bary.sum() - 1.0) > 1e-6 ||
      !bary.allFinite()) {
    throw Error(ErrorCode::kDegenerateWeights,
                "barycentric weights must be nonnegative and sum to one");
  }

  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector4d blend = Eigen::Vector4d::Zero();
  const Eigen::Quaterniond reference(triplet[0].rotation);
  for (int i = 0; i < 3; ++i) {
    center += bary[i] * CameraCenter(triplet[i]);
    Eigen::Quaterniond q(triplet[i].rotation);
    if (q.coeffs().dot(reference.coeffs()) < 0.0) q.coeffs() *= -1.0;
    blend += bary[i] * q.coeffs();
  }
  Eigen::Quaterniond q;
  q.coeffs() = blend.normalized();

  CameraPose pose;
  pose.rotation = Orthonormalize(q.toRotationMatrix());
  center += forward_jitter * OpticalAxis(pose);
  pose.translation = -pose.rotation * center;
  pose.intrinsics = triplet[0].intrinsics;
  return pose;
}

}  // namespace trisweep
