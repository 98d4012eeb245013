#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "trisweep/camera.h"
#include "trisweep/plane.h"
#include "trisweep/pyramid.h"

namespace trisweep {

struct DepthRange {
  double min = 0.5;
  double max = 8.5;
};

inline constexpr int kCoarseHypotheses = 32;
inline constexpr int kWindowHypotheses = 5;

// Depth hypotheses for one pyramid level. Coarse mode shares one list of
// depths across all pixels; refinement mode offsets a per-pixel base depth.
struct HypothesisSet {
  int level = kPyramidLevels - 1;
  std::vector<double> depths;   // coarse mode
  std::vector<double> offsets;  // refinement mode
  Image base;                   // refinement base depth, 0 = invalid

  bool refinement() const { return !offsets.empty(); }
  int count() const {
    return static_cast<int>(refinement() ? offsets.size() : depths.size());
  }
  // Hypothesis k at pixel (x, y); 0 when the base depth is invalid or the
  // offset would make it non-positive.
  double DepthAt(int k, int x, int y) const {
    if (!refinement()) return depths[k];
    const double b = base.at(x, y);
    if (!(b > 0.0)) return 0.0;
    const double d = b + offsets[k];
    return d > 0.0 ? d : 0.0;
  }
};

// `count` depths uniformly spanning [range.min, range.max], both ends
// included. Throws kInvalidArgument unless 0 < min < max and count >= 2.
HypothesisSet CoarseHypotheses(const DepthRange& range = {},
                               int count = kCoarseHypotheses);

// Half-width of the refinement window at `level`: 2^(level-1) * 0.02 m.
double WindowRadius(int level);

// `count` (odd) offsets evenly spaced over [-radius, +radius] including 0.
// Throws kLevelOutOfRange unless level is in 0..5.
std::vector<double> WindowOffsets(int level, int count = kWindowHypotheses);

HypothesisSet RefinementHypotheses(int level, Image base,
                                   int count = kWindowHypotheses);

// Relative geometry of a (source, target) pair for fronto-parallel planes in
// the target frame. Homography(d) = K_s (R_rel + t_rel n^T / d) K_t^-1 with
// n = (0, 0, 1); since n^T K_t^-1 = (0, 0, 1) only the last column depends on d.
struct PlaneSweepGeometry {
  Eigen::Matrix3d rotation_part;  // K_s R_rel K_t^-1
  Eigen::Vector3d translation_part;  // K_s t_rel

  PlaneSweepGeometry(const CameraPose& source, const CameraPose& target);

  Eigen::Matrix3d Homography(double depth) const {
    Eigen::Matrix3d h = rotation_part;
    h.col(2) += translation_part / depth;
    return h;
  }
};

// Maps homogeneous target pixels to source pixels for the plane z = d in
// target camera coordinates. Throws kNonPositiveDepth.
Eigen::Matrix3d PlaneHomography(const CameraPose& source,
                                const CameraPose& target, double depth);

// Source coordinate of target pixel center (u, v); returns false if the
// mapped point is behind the source camera.
inline bool ApplyHomography(const Eigen::Matrix3d& h, double u, double v,
                            double* su, double* sv) {
  const double w = h(2, 0) * u + h(2, 1) * v + h(2, 2);
  if (!(w > 0.0)) return false;
  *su = (h(0, 0) * u + h(0, 1) * v + h(0, 2)) / w;
  *sv = (h(1, 0) * u + h(1, 1) * v + h(1, 2)) / w;
  return true;
}

// Bilinear lookup at continuous coordinates (pixel (i, j) has center
// (j + 0.5, i + 0.5)). Succeeds iff all four taps are inside the image and
// the nearest-neighbor mask tap is on; `out` then holds all channels.
bool SampleBilinear(const FeaturePlane& feature, const Mask& mask, double u,
                    double v, double* out);

struct WarpedFeature {
  FeaturePlane feature;  // target geometry, 0 where invalid
  Mask validity;
};

// Throws kSingularHomography when |det H| <= 1e-12 or H is not finite,
// kSizeMismatch when mask and feature differ.
WarpedFeature Warp(const FeaturePlane& source_feature, const Mask& source_mask,
                   const Eigen::Matrix3d& homography, int target_width,
                   int target_height);

// Warp with a per-pixel plane depth; pixels with depth <= 0 are invalid.
// Poses must carry the intrinsics of the level being warped.
WarpedFeature WarpAtDepth(const FeaturePlane& source_feature,
                          const Mask& source_mask, const CameraPose& source,
                          const CameraPose& target, const Image& depth);

}  // namespace trisweep
