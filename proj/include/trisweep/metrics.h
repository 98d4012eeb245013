#pragma once

#include <array>
#include <optional>

#include <json.hpp>

#include "trisweep/plane.h"
#include "trisweep/pyramid.h"

namespace trisweep {

// 10 log10(1 / MSE) over all channels with MAX = 1; +infinity for identical
// images. Throws kSizeMismatch.
double Psnr(const Image& a, const Image& b);

// Mean SSIM of the luma channel over the valid region of an 11x11 Gaussian
// window (sigma 1.5, K1 0.01, K2 0.03, L 1). Single-channel inputs are used
// as luma. Throws kSizeMismatch, kTooSmall below 11 pixels.
double Ssim(const Image& a, const Image& b);

// Mean |pred - gt| over pixels where the mask is on. Throws kSizeMismatch,
// kEmptyMask.
double MaskedDepthMae(const DepthMap& pred, const DepthMap& gt,
                      const Mask& mask);

// Masked mean of max(|residual| - epsilon, 0). Throws kSizeMismatch,
// kEmptyMask.
double OffsetViolation(const Image& residual, double epsilon, const Mask& mask);

// Mean squared error. Throws kSizeMismatch.
double AlphaMse(const AlphaMap& pred, const AlphaMap& gt);

// Pixels valid in both depth maps.
Mask JointValidMask(const DepthMap& pred, const DepthMap& gt);

struct LevelReport {
  std::optional<double> depth_mae;     // over pixels valid in both maps
  double depth_coverage = 0.0;         // fraction of GT-valid pixels predicted
  std::optional<double> offset_violation;
  std::optional<double> alpha_mse;
};

struct EvalReport {
  std::optional<double> psnr;
  std::optional<double> ssim;
  std::array<LevelReport, kPyramidLevels> levels;
};

// Missing values become null, an infinite PSNR the string "inf". LPIPS is
// always null.
nlohmann::json ReportToJson(const EvalReport& report);

}  // namespace trisweep
