#pragma once

#include <array>
#include <optional>

#include "trisweep/camera.h"
#include "trisweep/depth.h"
#include "trisweep/fuse.h"
#include "trisweep/metrics.h"
#include "trisweep/pyramid.h"

namespace trisweep {

struct SourceView {
  Image rgb;  // 3 channels in [0, 1]
  Mask mask;
  CameraPose pose;
};

struct StageTimings {
  double pyramids_s = 0.0;
  double depth_s = 0.0;
  double fuse_s = 0.0;
  double synthesize_s = 0.0;
  double total_s = 0.0;
};

struct PipelineResult {
  DepthPyramid depth;
  std::array<FusedFeature, kPyramidLevels> fused;
  SynthesisResult synthesis;
  StageTimings timings;
};

// Pyramids, coarse-to-fine depth, per-level fusion and synthesis for a
// target camera whose intrinsics match the sources.
PipelineResult RunPipeline(const std::array<SourceView, kSourceViews>& sources,
                           const CameraPose& target, const DepthConfig& config);

struct GroundTruth {
  Image rgb;
  DepthMap depth;
  Mask mask;
};

// Image metrics against the ground-truth render plus per-level depth, offset
// and alpha measurements. Ground truth is box-downsampled for coarser levels.
EvalReport Evaluate(const PipelineResult& result, const GroundTruth& truth);

}  // namespace trisweep
