#pragma once

#include <array>

#include "trisweep/camera.h"
#include "trisweep/correlation.h"
#include "trisweep/fuse.h"
#include "trisweep/pyramid.h"
#include "trisweep/sweep.h"

namespace trisweep {

struct DepthConfig {
  DepthRange range;
  int coarse_count = kCoarseHypotheses;
  int window_count = kWindowHypotheses;
  double beta = 10.0;  // soft-argmax temperature, scores live in [-1, 1]
  ConfidenceParams confidence;
  // Alpha at coarser levels uses per-level confidence weights instead of the
  // level-0 weights pooled down the pyramid.
  bool per_level_weights = false;
  // Run the serial reference sweep instead of the fused OpenMP kernel.
  bool reference_sweep = false;

  void Validate() const;
};

// Source camera with its feature pyramid; pose carries level-0 intrinsics.
struct SourceStack {
  const FeaturePyramid* pyramid = nullptr;
  CameraPose pose;
};

struct RegressionResult {
  DepthMap depth;
  Image confidence;  // max normalized hypothesis weight, 0 where invalid
};

// Soft argmax over hypotheses: w_k proportional to validity_k *
// exp(beta * score_k). Pixels whose total validity is 0 are invalid.
// Throws kInvalidArgument for fewer than 2 hypotheses or beta <= 0,
// kShapeMismatch when the volume and hypotheses disagree.
RegressionResult RegressDepth(const CostVolume& volume,
                              const HypothesisSet& hypotheses, double beta);

// Valid-weighted bilinear upsampling to (width, height) with half-pixel
// centers; pixels with no valid tap stay invalid.
DepthMap UpsampleDepth(const DepthMap& coarse, int width, int height);

struct ResidualStats {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  size_t valid = 0;
};

struct LevelEstimate {
  DepthMap depth;
  AlphaMap alpha;
  Image confidence;
  Image residual;  // D^l - upsampled D^(l+1); empty at the coarsest level
  double window_radius = 0.0;
  ResidualStats stats;
  std::array<WarpedFeature, kSourceViews> warped;  // features at D^l
  ViewWeights weights;
};

// Sweeps the coarsest level over the uniform depth grid.
LevelEstimate EstimateCoarse(const std::array<SourceStack, kSourceViews>& sources,
                             const CameraPose& target, const DepthConfig& config);

// One refinement step: upsample, sweep a window of offsets around the
// upsampled depth, regress, and clamp the residual to the window radius.
// Throws kLevelMismatch if `previous` is not the level above at the right size.
LevelEstimate RefineLevel(const DepthMap& previous, int level,
                          const std::array<SourceStack, kSourceViews>& sources,
                          const CameraPose& target, const DepthConfig& config);

struct DepthPyramid {
  std::array<LevelEstimate, kPyramidLevels> levels;
};

// Full coarse-to-fine estimate, level 6 first.
DepthPyramid EstimatePyramid(const std::array<SourceStack, kSourceViews>& sources,
                             const CameraPose& target, const DepthConfig& config);

}  // namespace trisweep
