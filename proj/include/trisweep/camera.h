#pragma once

#include <array>

#include <Eigen/Core>

namespace trisweep {

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.5;
  double cy = 0.5;
  int width = 1;
  int height = 1;

  Eigen::Matrix3d K() const;
  Eigen::Matrix3d KInverse() const;

  // Intrinsics of the image downsampled `level` times by two. Pixel centers
  // sit at half-integer coordinates, so focal lengths and principal point
  // scale by exactly 2^-level.
  CameraIntrinsics AtLevel(int level) const;

  // Throws kInvalidArgument unless fx, fy > 0 and the principal point lies
  // strictly inside the image.
  void Validate() const;

  bool operator==(const CameraIntrinsics&) const = default;
};

// Square-pixel camera with the principal point at the image center.
CameraIntrinsics IntrinsicsFromFov(int width, int height, double fov_x_rad);

// Pinhole camera, world-to-camera convention: x_cam = rotation * x + translation.
// Camera frame is x right, y down, z forward.
struct CameraPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  CameraIntrinsics intrinsics;

  // Throws kInvalidArgument if rotation is not orthonormal with det +1
  // within `tolerance`, or intrinsics are invalid.
  void Validate(double tolerance = 1e-9) const;

  CameraPose AtLevel(int level) const;
};

struct Ray {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();

  // Normalizes `direction`; throws kInvalidArgument for a zero vector.
  static Ray Through(const Eigen::Vector3d& origin,
                     const Eigen::Vector3d& direction);
};

struct Projection {
  Eigen::Vector2d pixel;
  double depth = 0.0;
};

// Throws kBehindCamera when the camera-frame depth is not positive.
Projection Project(const CameraPose& pose, const Eigen::Vector3d& point);

// Throws kNonPositiveDepth.
Eigen::Vector3d Unproject(const CameraPose& pose, const Eigen::Vector2d& pixel,
                          double depth);

Eigen::Vector3d CameraCenter(const CameraPose& pose);

// Viewing direction in world coordinates.
Eigen::Vector3d OpticalAxis(const CameraPose& pose);

// Camera at `center` looking at `target`. The image x axis is kept
// perpendicular to `up` (no roll); when the view direction is parallel to
// `up` the world y axis is used as the roll reference instead.
CameraPose LookAt(const Eigen::Vector3d& center, const Eigen::Vector3d& target,
                  const Eigen::Vector3d& up, const CameraIntrinsics& intrinsics);

// Projects a near-rotation onto SO(3).
Eigen::Matrix3d Orthonormalize(const Eigen::Matrix3d& rotation);

// Barycentric blend of three poses. Centers are blended affinely, rotations
// by a hemisphere-aligned weighted quaternion sum. The result is then moved
// `forward_jitter` meters along its own optical axis. Intrinsics are copied
// from the first camera.
//
// Throws kDegenerateWeights if any weight < -1e-9 or the weights do not sum
// to one within 1e-6.
CameraPose InterpolatePose(const std::array<CameraPose, 3>& triplet,
                           const Eigen::Vector3d& bary, double forward_jitter);

}  // namespace trisweep
