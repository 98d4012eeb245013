#include "trisweep/sweep.h"

#include <Eigen/LU>

#include "trisweep/error.h"

namespace trisweep {

HypothesisSet CoarseHypotheses(const DepthRange& range, int count) {
  if (!(range.min > 0.0 && range.min < range.max)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < d_min < d_max");
  }
  if (count < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 2 hypotheses");
  }
  HypothesisSet set;
  set.level = kPyramidLevels - 1;
  set.depths.resize(count);
  const double span = range.max - range.min;
  for (int k = 0; k < count; ++k) {
    set.depths[k] = range.min + span * k / (count - 1);
  }
  set.depths.back() = range.max;
  return set;
}

double WindowRadius(int level) {
  if (level < 0 || level > kPyramidLevels - 2) {
    throw Error(ErrorCode::kLevelOutOfRange,
                "refinement levels are 0.." +
                    std::to_string(kPyramidLevels - 2));
  }
  return std::ldexp(0.02, level - 1);
}

std::vector<double> WindowOffsets(int level, int count) {
  const double radius = WindowRadius(level);
  if (count < 3 || count % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "window hypothesis count must be odd and >= 3");
  }
  std::vector<double> offsets(count);
  const int half = count - 1;
  for (int k = 0; k < count; ++k) {
    // Integer numerator keeps the set exactly symmetric with an exact 0.
    offsets[k] = radius * static_cast<double>(2 * k - half) / half;
  }
  return offsets;
}

HypothesisSet RefinementHypotheses(int level, Image base, int count) {
  HypothesisSet set;
  set.level = level;
  set.offsets = WindowOffsets(level, count);
  set.base = std::move(base);
  return set;
}

PlaneSweepGeometry::PlaneSweepGeometry(const CameraPose& source,
                                       const CameraPose& target) {
  const Eigen::Matrix3d r_rel = source.rotation * target.rotation.transpose();
  const Eigen::Vector3d t_rel = source.translation - r_rel * target.translation;
  const Eigen::Matrix3d k_s = source.intrinsics.K();
  rotation_part = k_s * r_rel * target.intrinsics.KInverse();
  translation_part = k_s * t_rel;
}

Eigen::Matrix3d PlaneHomography(const CameraPose& source,
                                const CameraPose& target, double depth) {
  if (!(depth > 0.0)) {
    throw Error(ErrorCode::kNonPositiveDepth, "plane depth must be positive");
  }
  return PlaneSweepGeometry(source, target).Homography(depth);
}

bool SampleBilinear(const FeaturePlane& feature, const Mask& mask, double u,
                    double v, double* out) {
  const int w = feature.width();
  const int h = feature.height();
  const double x = u - 0.5;
  const double y = v - 0.5;
  if (!(x >= 0.0 && x <= w - 1 && y >= 0.0 && y <= h - 1)) return false;
  if (!mask.at(static_cast<int>(std::floor(x + 0.5)),
               static_cast<int>(std::floor(y + 0.5)))) {
    return false;
  }

  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  if (x0 > w - 2) x0 = std::max(w - 2, 0);
  if (y0 > h - 2) y0 = std::max(h - 2, 0);
  const double fx = x - x0;
  const double fy = y - y0;
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);

  const double w00 = (1.0 - fx) * (1.0 - fy);
  const double w10 = fx * (1.0 - fy);
  const double w01 = (1.0 - fx) * fy;
  const double w11 = fx * fy;
  const auto p00 = feature.pixel(x0, y0);
  const auto p10 = feature.pixel(x1, y0);
  const auto p01 = feature.pixel(x0, y1);
  const auto p11 = feature.pixel(x1, y1);
  for (int c = 0; c < feature.channels(); ++c) {
    out[c] = w00 * p00[c] + w10 * p10[c] + w01 * p01[c] + w11 * p11[c];
  }
  return true;
}

WarpedFeature Warp(const FeaturePlane& source_feature, const Mask& source_mask,
                   const Eigen::Matrix3d& homography, int target_width,
                   int target_height) {
  if (!homography.allFinite() || !(std::abs(homography.determinant()) > 1e-12)) {
    throw Error(ErrorCode::kSingularHomography, "homography is singular");
  }
  if (!source_feature.SameShape(source_mask)) {
    throw Error(ErrorCode::kSizeMismatch, "feature and mask differ in size");
  }
  const int channels = source_feature.channels();
  WarpedFeature out{FeaturePlane(target_width, target_height, channels),
                    Mask(target_width, target_height, 1)};
  for (int y = 0; y < target_height; ++y) {
    for (int x = 0; x < target_width; ++x) {
      double su = 0.0;
      double sv = 0.0;
      if (ApplyHomography(homography, x + 0.5, y + 0.5, &su, &sv) &&
          SampleBilinear(source_feature, source_mask, su, sv,
                         out.feature.pixel(x, y).data())) {
        out.validity.at(x, y) = 1;
      }
    }
  }
  return out;
}

WarpedFeature WarpAtDepth(const FeaturePlane& source_feature,
                          const Mask& source_mask, const CameraPose& source,
                          const CameraPose& target, const Image& depth) {
  if (!source_feature.SameShape(source_mask)) {
    throw Error(ErrorCode::kSizeMismatch, "feature and mask differ in size");
  }
  const PlaneSweepGeometry geometry(source, target);
  const int w = depth.width();
  const int h = depth.height();
  const int channels = source_feature.channels();
  WarpedFeature out{FeaturePlane(w, h, channels), Mask(w, h, 1)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double d = depth.at(x, y);
      if (!(d > 0.0)) continue;
      double su = 0.0;
      double sv = 0.0;
      if (ApplyHomography(geometry.Homography(d), x + 0.5, y + 0.5, &su, &sv) &&
          SampleBilinear(source_feature, source_mask, su, sv,
                         out.feature.pixel(x, y).data())) {
        out.validity.at(x, y) = 1;
      } else {
        std::fill_n(out.feature.pixel(x, y).data(), channels, 0.0);
      }
    }
  }
  return out;
}

}  // namespace trisweep
