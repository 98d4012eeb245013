#include "trisweep/pipeline.h"

#include <chrono>

#include "trisweep/error.h"

namespace trisweep {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

Image MaskToImage(const Mask& mask) {
  Image out(mask.width(), mask.height(), 1);
  for (size_t i = 0; i < mask.size(); ++i) out.data()[i] = mask.data()[i] ? 1.0 : 0.0;
  return out;
}

}  // namespace

PipelineResult RunPipeline(const std::array<SourceView, kSourceViews>& sources,
                           const CameraPose& target, const DepthConfig& config) {
  const auto start = Clock::now();
  config.Validate();
  for (const auto& s : sources) {
    if (s.pose.intrinsics.width != target.intrinsics.width ||
        s.pose.intrinsics.height != target.intrinsics.height) {
      throw Error(ErrorCode::kSizeMismatch,
                  "source and target image sizes differ");
    }
    if (!s.rgb.SameShape(s.pose.intrinsics.width, s.pose.intrinsics.height)) {
      throw Error(ErrorCode::kSizeMismatch, "image does not match intrinsics");
    }
  }

  PipelineResult result;
  auto stage = Clock::now();
  std::array<FeaturePyramid, kSourceViews> pyramids;
  std::array<SourceStack, kSourceViews> stacks;
  for (int v = 0; v < kSourceViews; ++v) {
    pyramids[v] = BuildPyramid(sources[v].rgb, sources[v].mask);
    stacks[v] = SourceStack{&pyramids[v], sources[v].pose};
  }
  result.timings.pyramids_s = Seconds(stage);

  stage = Clock::now();
  result.depth = EstimatePyramid(stacks, target, config);
  result.timings.depth_s = Seconds(stage);

  stage = Clock::now();
  std::array<AlphaMap, kPyramidLevels> alphas;
  for (int l = 0; l < kPyramidLevels; ++l) {
    const auto& level = result.depth.levels[l];
    result.fused[l] = FuseFeatures(level.warped, level.weights);
    alphas[l] = level.alpha;
  }
  result.timings.fuse_s = Seconds(stage);

  stage = Clock::now();
  result.synthesis = Synthesize(result.fused, alphas);
  result.timings.synthesize_s = Seconds(stage);
  result.timings.total_s = Seconds(start);
  return result;
}

EvalReport Evaluate(const PipelineResult& result, const GroundTruth& truth) {
  EvalReport report;
  report.psnr = Psnr(result.synthesis.rgb, truth.rgb);
  report.ssim = Ssim(result.synthesis.rgb, truth.rgb);

  DepthMap gt_depth = truth.depth;
  Image gt_alpha = MaskToImage(truth.mask);
  for (int l = 0; l < kPyramidLevels; ++l) {
    if (l > 0) {
      gt_depth = DownsampleDepth(gt_depth);
      gt_alpha = DownsampleBox(gt_alpha);
    }
    const LevelEstimate& est = result.depth.levels[l];
    LevelReport& lv = report.levels[l];

    const Mask joint = JointValidMask(est.depth, gt_depth);
    size_t joint_count = 0;
    size_t gt_count = 0;
    for (int y = 0; y < gt_depth.height(); ++y) {
      for (int x = 0; x < gt_depth.width(); ++x) {
        gt_count += gt_depth.valid(x, y);
        joint_count += joint.at(x, y);
      }
    }
    if (joint_count > 0) lv.depth_mae = MaskedDepthMae(est.depth, gt_depth, joint);
    lv.depth_coverage =
        gt_count ? static_cast<double>(joint_count) / gt_count : 0.0;

    if (!est.residual.empty()) {
      Mask valid(est.depth.width(), est.depth.height(), 1);
      bool any = false;
      for (int y = 0; y < valid.height(); ++y) {
        for (int x = 0; x < valid.width(); ++x) {
          valid.at(x, y) = est.depth.valid(x, y);
          any = any || valid.at(x, y);
        }
      }
      if (any) {
        lv.offset_violation =
            OffsetViolation(est.residual, est.window_radius, valid);
      }
    }
    lv.alpha_mse = AlphaMse(est.alpha, AlphaMap{gt_alpha});
  }
  return report;
}

}  // namespace trisweep
