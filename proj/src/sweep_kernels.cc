#include "trisweep/sweep_kernels.h"

#include "trisweep/error.h"

namespace trisweep {
namespace {

void CheckProblem(const SweepProblem& problem) {
  if (problem.hypotheses == nullptr || problem.hypotheses->count() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "sweep without hypotheses");
  }
  const int channels = problem.views[0].feature->channels();
  for (const auto& view : problem.views) {
    if (view.feature == nullptr || view.mask == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "sweep view without data");
    }
    if (!view.feature->SameShape(*view.mask) ||
        view.feature->channels() != channels) {
      throw Error(ErrorCode::kShapeMismatch, "sweep view planes disagree");
    }
  }
  if (problem.groups <= 0 || channels % problem.groups != 0) {
    throw Error(ErrorCode::kBadGrouping, "channels not divisible by groups");
  }
  const auto& hyps = *problem.hypotheses;
  if (hyps.refinement() &&
      !hyps.base.SameShape(problem.target.intrinsics.width,
                           problem.target.intrinsics.height)) {
    throw Error(ErrorCode::kShapeMismatch,
                "refinement base does not match the target size");
  }
}

}  // namespace

CostVolume SweepReference(const SweepProblem& problem) {
  CheckProblem(problem);
  const auto& hyps = *problem.hypotheses;
  const int w = problem.target.intrinsics.width;
  const int h = problem.target.intrinsics.height;

  std::array<std::vector<WarpedFeature>, kSourceViews> warped;
  for (int v = 0; v < kSourceViews; ++v) {
    const auto& view = problem.views[v];
    for (int k = 0; k < hyps.count(); ++k) {
      if (hyps.refinement()) {
        Image depth(w, h, 1);
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) depth.at(x, y) = hyps.DepthAt(k, x, y);
        }
        warped[v].push_back(WarpAtDepth(*view.feature, *view.mask, view.pose,
                                        problem.target, depth));
      } else {
        warped[v].push_back(
            Warp(*view.feature, *view.mask,
                 PlaneHomography(view.pose, problem.target, hyps.depths[k]), w,
                 h));
      }
    }
  }
  return BuildCostVolume(warped, problem.groups, hyps.level);
}

CostVolume SweepParallel(const SweepProblem& problem) {
  CheckProblem(problem);
  const auto& hyps = *problem.hypotheses;
  const int w = problem.target.intrinsics.width;
  const int h = problem.target.intrinsics.height;
  const int count = hyps.count();
  const int channels = problem.views[0].feature->channels();

  std::array<PlaneSweepGeometry, kSourceViews> geometry = {
      PlaneSweepGeometry(problem.views[0].pose, problem.target),
      PlaneSweepGeometry(problem.views[1].pose, problem.target),
      PlaneSweepGeometry(problem.views[2].pose, problem.target)};

  // Coarse mode shares one homography per (view, hypothesis).
  std::vector<std::array<Eigen::Matrix3d, kSourceViews>> shared;
  if (!hyps.refinement()) {
    shared.resize(count);
    for (int k = 0; k < count; ++k) {
      for (int v = 0; v < kSourceViews; ++v) {
        shared[k][v] = geometry[v].Homography(hyps.depths[k]);
      }
    }
  }

  CostVolume volume;
  volume.level = hyps.level;
  volume.width = w;
  volume.height = h;
  volume.count = count;
  volume.score.assign(static_cast<size_t>(count) * w * h, 0.0);
  volume.validity.assign(static_cast<size_t>(count) * w * h, 0.0);

#pragma omp parallel
  {
    std::vector<double> samples(static_cast<size_t>(kSourceViews) * channels);
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double u = x + 0.5;
        const double v = y + 0.5;
        for (int k = 0; k < count; ++k) {
          std::array<const double*, kSourceViews> f;
          std::array<bool, kSourceViews> valid{};
          const double d = hyps.DepthAt(k, x, y);
          for (int view = 0; view < kSourceViews; ++view) {
            double* out = samples.data() + view * channels;
            f[view] = out;
            if (!(d > 0.0)) continue;
            double su = 0.0;
            double sv = 0.0;
            const Eigen::Matrix3d hom = hyps.refinement()
                                            ? geometry[view].Homography(d)
                                            : shared[k][view];
            valid[view] =
                ApplyHomography(hom, u, v, &su, &sv) &&
                SampleBilinear(*problem.views[view].feature,
                               *problem.views[view].mask, su, sv, out);
          }
          const size_t i = volume.Index(k, x, y);
          AggregatePairs(f, valid, channels, problem.groups, &volume.score[i],
                         &volume.validity[i]);
        }
      }
    }
  }
  return volume;
}

}  // namespace trisweep
