#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "trisweep/camera.h"
#include "trisweep/plane.h"

namespace trisweep::testing {

inline Eigen::Matrix3d RandomRotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline CameraIntrinsics TestIntrinsics() {
  CameraIntrinsics k;
  k.fx = 100.0;
  k.fy = 100.0;
  k.cx = 50.0;
  k.cy = 50.0;
  k.width = 100;
  k.height = 100;
  return k;
}

inline CameraPose RandomPose(std::mt19937_64& rng, const CameraIntrinsics& k) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  CameraPose pose;
  pose.rotation = RandomRotation(rng);
  pose.translation = Eigen::Vector3d(u(rng), u(rng), u(rng));
  pose.intrinsics = k;
  return pose;
}

// Camera at `center` looking straight down the world -z axis.
inline CameraPose DownLooking(const Eigen::Vector3d& center,
                              const CameraIntrinsics& k) {
  return LookAt(center, center - Eigen::Vector3d::UnitZ(),
                Eigen::Vector3d::UnitY(), k);
}

inline Image SmoothImage(int w, int h, int channels, double phase = 0.0) {
  Image img(w, h, channels);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        img.at(x, y, c) = 0.5 + 0.4 * std::sin(0.21 * x + 0.13 * y + phase + c) *
                                    std::cos(0.07 * y - 0.11 * x + 0.5 * c);
      }
    }
  }
  return img;
}

}  // namespace trisweep::testing

#include <array>

#include "trisweep/correlation.h"
#include "trisweep/depth.h"
#include "trisweep/pyramid.h"
#include "trisweep/scene.h"

namespace trisweep::testing {

// Target looking straight down at the ground from `height`; three sources at
// the same distance from the look-at point, tilted `tilt_deg` off the target
// axis and spread 120 degrees apart in azimuth.
struct TripletSetup {
  SceneSpec scene;
  CameraPose target;
  std::array<CameraPose, kSourceViews> sources;
};

inline GroundPlane TexturedGround() {
  GroundPlane g;
  g.cell = 0.0271;
  g.octaves = 6;
  g.persistence = 2.0;
  g.extent = {-50.0, 50.0, -50.0, 50.0};
  return g;
}

inline TripletSetup DownLookingTriplet(int size, double height = 3.0,
                                       double tilt_deg = 15.0) {
  TripletSetup s;
  s.scene.ground = TexturedGround();
  const CameraIntrinsics k = IntrinsicsFromFov(size, size, std::numbers::pi / 3);
  const Eigen::Vector3d look(0.0, 0.0, 0.0);
  s.target = DownLooking({0.0, 0.0, height}, k);
  const double tilt = tilt_deg * std::numbers::pi / 180.0;
  for (int i = 0; i < kSourceViews; ++i) {
    const double az = 2.0 * std::numbers::pi * i / kSourceViews + 0.3;
    const Eigen::Vector3d c(height * std::sin(tilt) * std::cos(az),
                            height * std::sin(tilt) * std::sin(az),
                            height * std::cos(tilt));
    s.sources[i] = LookAt(c, look, Eigen::Vector3d::UnitY(), k);
  }
  return s;
}

struct RenderedSources {
  std::array<RenderResult, kSourceViews> renders;
  std::array<FeaturePyramid, kSourceViews> pyramids;

  std::array<SourceStack, kSourceViews> Stacks(
      const std::array<CameraPose, kSourceViews>& poses) const {
    std::array<SourceStack, kSourceViews> out;
    for (int v = 0; v < kSourceViews; ++v) out[v] = {&pyramids[v], poses[v]};
    return out;
  }
};

inline RenderedSources RenderSources(const TripletSetup& s) {
  RenderedSources out;
  for (int v = 0; v < kSourceViews; ++v) {
    out.renders[v] = Render(s.scene, s.sources[v]);
    out.pyramids[v] = BuildPyramid(out.renders[v].rgb, out.renders[v].mask);
  }
  return out;
}

inline double MeanAbsError(const DepthMap& pred, const DepthMap& gt) {
  double sum = 0.0;
  int n = 0;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      if (!gt.valid(x, y) || !pred.valid(x, y)) continue;
      sum += std::abs(pred.depth.at(x, y) - gt.depth.at(x, y));
      ++n;
    }
  }
  return n ? sum / n : 0.0;
}

}  // namespace trisweep::testing
