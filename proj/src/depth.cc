#include "trisweep/depth.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trisweep/error.h"
#include "trisweep/sweep_kernels.h"

namespace trisweep {
namespace {

void CheckSources(const std::array<SourceStack, kSourceViews>& sources) {
  for (const auto& s : sources) {
    if (s.pyramid == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "source without pyramid");
    }
  }
}

CostVolume Sweep(const std::array<SourceStack, kSourceViews>& sources,
                 const CameraPose& target_level, const HypothesisSet& hyps,
                 const DepthConfig& config) {
  SweepProblem problem;
  for (int v = 0; v < kSourceViews; ++v) {
    problem.views[v].feature = &sources[v].pyramid->features[hyps.level];
    problem.views[v].mask = &sources[v].pyramid->masks[hyps.level];
    problem.views[v].pose = sources[v].pose.AtLevel(hyps.level);
  }
  problem.target = target_level;
  problem.hypotheses = &hyps;
  problem.groups = config.confidence.groups;
  return config.reference_sweep ? SweepReference(problem)
                                : SweepParallel(problem);
}

// Warps at the final depth, then confidence weights and alpha.
void FinishLevel(LevelEstimate& estimate, int level,
                 const std::array<SourceStack, kSourceViews>& sources,
                 const CameraPose& target_level, const DepthConfig& config) {
  std::array<ViewMeta, kSourceViews> meta;
  std::array<Mask, kSourceViews> masks;
  for (int v = 0; v < kSourceViews; ++v) {
    const CameraPose source = sources[v].pose.AtLevel(level);
    estimate.warped[v] =
        WarpAtDepth(sources[v].pyramid->features[level],
                    sources[v].pyramid->masks[level], source, target_level,
                    estimate.depth.depth);
    meta[v] = ComputeViewMeta(source, target_level);
    masks[v] = estimate.warped[v].validity;
  }
  estimate.weights = ConfidenceWeights(estimate.warped, meta, config.confidence);
  estimate.alpha = EstimateAlpha(masks, estimate.weights.weights);
}

// 2x2 mean of the finer weights, renormalized per pixel.
std::array<Image, kSourceViews> PoolWeights(
    const std::array<Image, kSourceViews>& fine) {
  std::array<Image, kSourceViews> coarse;
  for (int v = 0; v < kSourceViews; ++v) coarse[v] = DownsampleBox(fine[v]);
  const int w = coarse[0].width();
  const int h = coarse[0].height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double total = 0.0;
      for (const auto& plane : coarse) total += plane.at(x, y);
      for (auto& plane : coarse) {
        plane.at(x, y) = total > 0.0 ? plane.at(x, y) / total : 0.0;
      }
    }
  }
  return coarse;
}

}  // namespace

void DepthConfig::Validate() const {
  if (!(range.min > 0.0 && range.min < range.max)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < d_min < d_max");
  }
  if (coarse_count < 2 || window_count < 3 || window_count % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "need >= 2 coarse hypotheses and an odd window count >= 3");
  }
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta must be positive");
  }
}

RegressionResult RegressDepth(const CostVolume& volume,
                              const HypothesisSet& hypotheses, double beta) {
  if (volume.count < 2 || hypotheses.count() != volume.count) {
    throw Error(volume.count < 2 ? ErrorCode::kInvalidArgument
                                 : ErrorCode::kShapeMismatch,
                "regression needs >= 2 matching hypotheses");
  }
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta must be positive");
  }
  if (hypotheses.refinement() &&
      !hypotheses.base.SameShape(volume.width, volume.height)) {
    throw Error(ErrorCode::kShapeMismatch, "hypothesis base size differs");
  }
  const int w = volume.width;
  const int h = volume.height;
  RegressionResult result{DepthMap{Image(w, h, 1), volume.level},
                          Image(w, h, 1)};
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double peak = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < volume.count; ++k) {
        const size_t i = volume.Index(k, x, y);
        if (volume.validity[i] > 0.0) peak = std::max(peak, beta * volume.score[i]);
      }
      if (!std::isfinite(peak)) continue;
      double wsum = 0.0;
      double dsum = 0.0;
      double wmax = 0.0;
      for (int k = 0; k < volume.count; ++k) {
        const size_t i = volume.Index(k, x, y);
        if (!(volume.validity[i] > 0.0)) continue;
        const double wk =
            volume.validity[i] * std::exp(beta * volume.score[i] - peak);
        wsum += wk;
        dsum += wk * hypotheses.DepthAt(k, x, y);
        wmax = std::max(wmax, wk);
      }
      result.depth.depth.at(x, y) = dsum / wsum;
      result.confidence.at(x, y) = wmax / wsum;
    }
  }
  return result;
}

DepthMap UpsampleDepth(const DepthMap& coarse, int width, int height) {
  DepthMap out{Image(width, height, 1), std::max(coarse.level - 1, 0)};
  const int cw = coarse.width();
  const int ch = coarse.height();
  for (int y = 0; y < height; ++y) {
    const double cy = std::clamp((y + 0.5) / 2.0 - 0.5, 0.0, ch - 1.0);
    const int y0 = static_cast<int>(cy);
    const int y1 = std::min(y0 + 1, ch - 1);
    const double fy = cy - y0;
    for (int x = 0; x < width; ++x) {
      const double cx = std::clamp((x + 0.5) / 2.0 - 0.5, 0.0, cw - 1.0);
      const int x0 = static_cast<int>(cx);
      const int x1 = std::min(x0 + 1, cw - 1);
      const double fx = cx - x0;
      const std::array<std::pair<double, double>, 4> taps = {{
          {(1 - fx) * (1 - fy), coarse.depth.at(x0, y0)},
          {fx * (1 - fy), coarse.depth.at(x1, y0)},
          {(1 - fx) * fy, coarse.depth.at(x0, y1)},
          {fx * fy, coarse.depth.at(x1, y1)},
      }};
      double wsum = 0.0;
      double dsum = 0.0;
      for (const auto& [wt, d] : taps) {
        if (d > 0.0 && wt > 0.0) {
          wsum += wt;
          dsum += wt * d;
        }
      }
      out.depth.at(x, y) = wsum > 0.0 ? dsum / wsum : 0.0;
    }
  }
  return out;
}

LevelEstimate EstimateCoarse(const std::array<SourceStack, kSourceViews>& sources,
                             const CameraPose& target, const DepthConfig& config) {
  CheckSources(sources);
  config.Validate();
  constexpr int kLevel = kPyramidLevels - 1;
  const CameraPose target_level = target.AtLevel(kLevel);
  const HypothesisSet hyps = CoarseHypotheses(config.range, config.coarse_count);

  const CostVolume volume = Sweep(sources, target_level, hyps, config);
  RegressionResult regressed = RegressDepth(volume, hyps, config.beta);

  LevelEstimate estimate;
  estimate.depth = std::move(regressed.depth);
  estimate.depth.level = kLevel;
  estimate.confidence = std::move(regressed.confidence);
  FinishLevel(estimate, kLevel, sources, target_level, config);
  return estimate;
}

LevelEstimate RefineLevel(const DepthMap& previous, int level,
                          const std::array<SourceStack, kSourceViews>& sources,
                          const CameraPose& target, const DepthConfig& config) {
  CheckSources(sources);
  config.Validate();
  if (level < 0 || level > kPyramidLevels - 2) {
    throw Error(ErrorCode::kLevelOutOfRange, "refinement level out of range");
  }
  const CameraPose target_level = target.AtLevel(level);
  const int w = target_level.intrinsics.width;
  const int h = target_level.intrinsics.height;
  if (previous.level != level + 1 ||
      previous.width() != LevelExtent(target.intrinsics.width, level + 1) ||
      previous.height() != LevelExtent(target.intrinsics.height, level + 1)) {
    throw Error(ErrorCode::kLevelMismatch,
                "previous depth is not the next coarser level");
  }

  const DepthMap upsampled = UpsampleDepth(previous, w, h);
  const HypothesisSet hyps =
      RefinementHypotheses(level, upsampled.depth, config.window_count);
  const CostVolume volume = Sweep(sources, target_level, hyps, config);
  RegressionResult regressed = RegressDepth(volume, hyps, config.beta);

  LevelEstimate estimate;
  estimate.window_radius = WindowRadius(level);
  estimate.depth = DepthMap{Image(w, h, 1), level};
  estimate.residual = Image(w, h, 1);
  estimate.confidence = std::move(regressed.confidence);
  const double eps = estimate.window_radius;
  double abs_sum = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double base = upsampled.depth.at(x, y);
      const double refined = regressed.depth.depth.at(x, y);
      if (!(base > 0.0) || !(refined > 0.0)) continue;
      const double delta = std::clamp(refined - base, -eps, eps);
      estimate.residual.at(x, y) = delta;
      estimate.depth.depth.at(x, y) = base + delta;
      estimate.stats.max_abs = std::max(estimate.stats.max_abs, std::abs(delta));
      abs_sum += std::abs(delta);
      ++estimate.stats.valid;
    }
  }
  if (estimate.stats.valid) estimate.stats.mean_abs = abs_sum / estimate.stats.valid;
  FinishLevel(estimate, level, sources, target_level, config);
  return estimate;
}

DepthPyramid EstimatePyramid(const std::array<SourceStack, kSourceViews>& sources,
                             const CameraPose& target, const DepthConfig& config) {
  DepthPyramid pyramid;
  pyramid.levels[kPyramidLevels - 1] = EstimateCoarse(sources, target, config);
  for (int l = kPyramidLevels - 2; l >= 0; --l) {
    pyramid.levels[l] =
        RefineLevel(pyramid.levels[l + 1].depth, l, sources, target, config);
  }

  if (!config.per_level_weights) {
    std::array<Image, kSourceViews> weights = pyramid.levels[0].weights.weights;
    for (int l = 1; l < kPyramidLevels; ++l) {
      weights = PoolWeights(weights);
      std::array<Mask, kSourceViews> masks;
      for (int v = 0; v < kSourceViews; ++v) {
        masks[v] = pyramid.levels[l].warped[v].validity;
      }
      pyramid.levels[l].alpha = EstimateAlpha(masks, weights);
    }
  }
  return pyramid;
}

}  // namespace trisweep
