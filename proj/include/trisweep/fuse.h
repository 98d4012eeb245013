#pragma once

#include <array>

#include "trisweep/camera.h"
#include "trisweep/correlation.h"
#include "trisweep/plane.h"
#include "trisweep/pyramid.h"
#include "trisweep/sweep.h"

namespace trisweep {

// Direction of a source optical axis seen from the target camera, radians.
struct ViewMeta {
  double azimuth = 0.0;    // (-pi, pi]
  double elevation = 0.0;  // [-pi/2, pi/2], positive = pitched up

  double AngularDistance() const;
};

ViewMeta ComputeViewMeta(const CameraPose& source, const CameraPose& target);

struct ViewWeights {
  std::array<Image, kSourceViews> weights;
  Mask valid;
};

struct ConfidenceParams {
  double kappa_photo = 5.0;
  double kappa_ang = 2.0;
  int groups = kCorrelationGroups;
};

// raw_i = exp(kappa_photo * rho_i - kappa_ang * theta_i) for valid views,
// where rho_i is the mean group correlation of view i against the other
// valid views (0 if it is the only one) and theta_i its angular distance.
// Weights are raw normalized to sum to one; pixels with no valid view are
// invalid with all weights 0.
ViewWeights ConfidenceWeights(
    const std::array<WarpedFeature, kSourceViews>& warped,
    const std::array<ViewMeta, kSourceViews>& meta,
    const ConfidenceParams& params = {});

struct FusedFeature {
  FeaturePlane feature;
  Mask valid;
};

// Per-pixel weighted sum of the warped features. Throws kShapeMismatch.
FusedFeature FuseFeatures(const std::array<WarpedFeature, kSourceViews>& warped,
                          const ViewWeights& weights);

// Weighted mean of the warped source masks, clamped to [0, 1].
AlphaMap EstimateAlpha(const std::array<Mask, kSourceViews>& warped_masks,
                       const std::array<Image, kSourceViews>& weights);

// Pull-push hole filling of a multi-channel image: valid values are averaged
// down a 2x pyramid, then holes are filled coarse to fine by bilinear
// upsampling. Valid pixels are left untouched. With no valid pixel the
// result is all zeros.
Image PullPushFill(const Image& image, const Mask& valid);

struct SynthesisResult {
  Image rgb;  // 3 channels in [0, 1]
  AlphaMap alpha;
};

// Uses the level-0 fused RGB channels (mapped back to [0, 1]) and alpha;
// invalid pixels of both are filled by pull-push.
SynthesisResult Synthesize(
    const std::array<FusedFeature, kPyramidLevels>& fused,
    const std::array<AlphaMap, kPyramidLevels>& alphas);

}  // namespace trisweep
