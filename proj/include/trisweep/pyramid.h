#pragma once

#include <array>

#include "trisweep/plane.h"

namespace trisweep {

inline constexpr int kPyramidLevels = 7;
inline constexpr int kFeatureChannels = 8;

// Channel layout of a feature plane. Every channel is mapped into [-1, 1].
enum FeatureChannel : int {
  kRed = 0,
  kGreen,
  kBlue,
  kLuma,
  kGradX,      // central difference of the luma channel
  kGradY,
  kLocalMean,  // 5x5 box mean of the luma channel
  kLocalStd,   // 2 * (5x5 standard deviation of raw luma)
};

using FeaturePlane = Image;

struct FeaturePyramid {
  std::array<FeaturePlane, kPyramidLevels> features;
  std::array<Mask, kPyramidLevels> masks;
  std::array<Image, kPyramidLevels> images;  // box-downsampled RGB
};

inline double Luma(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

// 8-channel features of one RGB image in [0, 1].
FeaturePlane ComputeFeatures(const Image& rgb);

// 2x2 box mean; odd trailing rows/columns average the children that exist.
Image DownsampleBox(const Image& image);

// A coarse pixel is on iff any of its children is on.
Mask DownsampleMaskAny(const Mask& mask);

// Throws kSizeMismatch when image and mask differ in size, kTooSmall when the
// shorter side is below 64 pixels, kInvalidArgument for non-RGB input.
FeaturePyramid BuildPyramid(const Image& rgb, const Mask& mask);

// 2x2 mean over valid children; invalid where no child is valid.
DepthMap DownsampleDepth(const DepthMap& depth);

}  // namespace trisweep
