#pragma once

#include <array>

#include "trisweep/camera.h"
#include "trisweep/correlation.h"
#include "trisweep/pyramid.h"
#include "trisweep/sweep.h"

namespace trisweep {

// One source view at one pyramid level. Pose intrinsics must match the level.
struct SweepView {
  const FeaturePlane* feature = nullptr;
  const Mask* mask = nullptr;
  CameraPose pose;
};

struct SweepProblem {
  std::array<SweepView, kSourceViews> views;
  CameraPose target;  // level intrinsics; width/height give the volume size
  const HypothesisSet* hypotheses = nullptr;
  int groups = kCorrelationGroups;
};

// Serial reference: materializes every warped plane with Warp/WarpAtDepth,
// then scores them with BuildCostVolume.
CostVolume SweepReference(const SweepProblem& problem);

// Fused kernel: samples, correlates and aggregates per pixel without
// materializing warps. Rows are split across OpenMP threads; each pixel is
// computed independently with the same arithmetic as the reference, so the
// result does not depend on the thread count.
CostVolume SweepParallel(const SweepProblem& problem);

}  // namespace trisweep
