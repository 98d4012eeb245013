#include "trisweep/fuse.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trisweep/error.h"

namespace trisweep {

double ViewMeta::AngularDistance() const {
  return std::sqrt(azimuth * azimuth + elevation * elevation);
}

ViewMeta ComputeViewMeta(const CameraPose& source, const CameraPose& target) {
  const Eigen::Vector3d axis = target.rotation * OpticalAxis(source);
  ViewMeta meta;
  meta.azimuth = std::atan2(axis.x(), axis.z());
  if (meta.azimuth == -std::numbers::pi) meta.azimuth = std::numbers::pi;
  meta.elevation = std::asin(std::clamp(-axis.y() / axis.norm(), -1.0, 1.0));
  return meta;
}

ViewWeights ConfidenceWeights(
    const std::array<WarpedFeature, kSourceViews>& warped,
    const std::array<ViewMeta, kSourceViews>& meta,
    const ConfidenceParams& params) {
  const int w = warped[0].feature.width();
  const int h = warped[0].feature.height();
  const int channels = warped[0].feature.channels();
  for (const auto& view : warped) {
    if (!view.feature.SameShape(w, h) || !view.validity.SameShape(w, h)) {
      throw Error(ErrorCode::kShapeMismatch, "warped views differ in size");
    }
  }
  if (params.groups <= 0 || channels % params.groups != 0) {
    throw Error(ErrorCode::kBadGrouping, "channels not divisible by groups");
  }

  ViewWeights out;
  for (auto& plane : out.weights) plane = Image(w, h, 1);
  out.valid = Mask(w, h, 1);
  std::array<double, kSourceViews> angular;
  for (int i = 0; i < kSourceViews; ++i) angular[i] = meta[i].AngularDistance();

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::array<double, kSourceViews> raw{};
      double total = 0.0;
      for (int i = 0; i < kSourceViews; ++i) {
        if (!warped[i].validity.at(x, y)) continue;
        double rho = 0.0;
        int others = 0;
        for (int j = 0; j < kSourceViews; ++j) {
          if (j == i || !warped[j].validity.at(x, y)) continue;
          rho += MeanGroupCorrelation(warped[i].feature.pixel(x, y).data(),
                                      warped[j].feature.pixel(x, y).data(),
                                      channels, params.groups);
          ++others;
        }
        if (others) rho /= others;
        raw[i] = std::exp(params.kappa_photo * rho -
                          params.kappa_ang * angular[i]);
        total += raw[i];
      }
      if (!(total > 0.0)) continue;
      out.valid.at(x, y) = 1;
      for (int i = 0; i < kSourceViews; ++i) {
        out.weights[i].at(x, y) = raw[i] / total;
      }
    }
  }
  return out;
}

FusedFeature FuseFeatures(const std::array<WarpedFeature, kSourceViews>& warped,
                          const ViewWeights& weights) {
  const int w = warped[0].feature.width();
  const int h = warped[0].feature.height();
  const int channels = warped[0].feature.channels();
  if (!weights.valid.SameShape(w, h)) {
    throw Error(ErrorCode::kShapeMismatch, "weights and warps differ in size");
  }
  for (int i = 0; i < kSourceViews; ++i) {
    if (!warped[i].feature.SameShape(w, h) ||
        warped[i].feature.channels() != channels ||
        !weights.weights[i].SameShape(w, h)) {
      throw Error(ErrorCode::kShapeMismatch, "warped views differ in size");
    }
  }
  FusedFeature out{FeaturePlane(w, h, channels), weights.valid};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!weights.valid.at(x, y)) continue;
      auto dst = out.feature.pixel(x, y);
      for (int i = 0; i < kSourceViews; ++i) {
        const double wi = weights.weights[i].at(x, y);
        const auto src = warped[i].feature.pixel(x, y);
        for (int c = 0; c < channels; ++c) dst[c] += wi * src[c];
      }
    }
  }
  return out;
}

AlphaMap EstimateAlpha(const std::array<Mask, kSourceViews>& warped_masks,
                       const std::array<Image, kSourceViews>& weights) {
  const int w = warped_masks[0].width();
  const int h = warped_masks[0].height();
  for (int i = 0; i < kSourceViews; ++i) {
    if (!warped_masks[i].SameShape(w, h) || !weights[i].SameShape(w, h)) {
      throw Error(ErrorCode::kShapeMismatch, "alpha inputs differ in size");
    }
  }
  AlphaMap alpha{Image(w, h, 1)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double a = 0.0;
      for (int i = 0; i < kSourceViews; ++i) {
        if (warped_masks[i].at(x, y)) a += weights[i].at(x, y);
      }
      alpha.alpha.at(x, y) = std::clamp(a, 0.0, 1.0);
    }
  }
  return alpha;
}

Image PullPushFill(const Image& image, const Mask& valid) {
  if (!image.SameShape(valid)) {
    throw Error(ErrorCode::kShapeMismatch, "image and mask differ in size");
  }
  const int channels = image.channels();

  // Push: valid-weighted means down to a single pixel.
  std::vector<Image> values{image};
  std::vector<Image> weight{Image(image.width(), image.height(), 1)};
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      weight[0].at(x, y) = valid.at(x, y) ? 1.0 : 0.0;
    }
  }
  while (values.back().width() > 1 || values.back().height() > 1) {
    const Image& fine = values.back();
    const Image& fine_w = weight.back();
    const int w = (fine.width() + 1) / 2;
    const int h = (fine.height() + 1) / 2;
    Image coarse(w, h, channels);
    Image coarse_w(w, h, 1);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double wsum = 0.0;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const int xx = 2 * x + dx;
            const int yy = 2 * y + dy;
            if (xx >= fine.width() || yy >= fine.height()) continue;
            const double wt = fine_w.at(xx, yy);
            if (wt <= 0.0) continue;
            wsum += wt;
            for (int c = 0; c < channels; ++c) {
              coarse.at(x, y, c) += wt * fine.at(xx, yy, c);
            }
          }
        }
        if (wsum > 0.0) {
          for (int c = 0; c < channels; ++c) coarse.at(x, y, c) /= wsum;
          coarse_w.at(x, y) = 1.0;
        }
      }
    }
    values.push_back(std::move(coarse));
    weight.push_back(std::move(coarse_w));
  }

  // Pull: fill holes from the (already filled) coarser level.
  for (int l = static_cast<int>(values.size()) - 2; l >= 0; --l) {
    Image& fine = values[l];
    const Image& fine_w = weight[l];
    const Image& coarse = values[l + 1];
    const int cw = coarse.width();
    const int ch = coarse.height();
    for (int y = 0; y < fine.height(); ++y) {
      for (int x = 0; x < fine.width(); ++x) {
        if (fine_w.at(x, y) > 0.0) continue;
        const double cx = std::clamp((x + 0.5) / 2.0 - 0.5, 0.0, cw - 1.0);
        const double cy = std::clamp((y + 0.5) / 2.0 - 0.5, 0.0, ch - 1.0);
        const int x0 = static_cast<int>(cx);
        const int y0 = static_cast<int>(cy);
        const int x1 = std::min(x0 + 1, cw - 1);
        const int y1 = std::min(y0 + 1, ch - 1);
        const double fx = cx - x0;
        const double fy = cy - y0;
        for (int c = 0; c < channels; ++c) {
          fine.at(x, y, c) = (1 - fx) * (1 - fy) * coarse.at(x0, y0, c) +
                             fx * (1 - fy) * coarse.at(x1, y0, c) +
                             (1 - fx) * fy * coarse.at(x0, y1, c) +
                             fx * fy * coarse.at(x1, y1, c);
        }
      }
    }
  }
  Image out = std::move(values[0]);
  // Valid pixels keep their exact input values.
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!valid.at(x, y)) continue;
      for (int c = 0; c < channels; ++c) out.at(x, y, c) = image.at(x, y, c);
    }
  }
  return out;
}

SynthesisResult Synthesize(
    const std::array<FusedFeature, kPyramidLevels>& fused,
    const std::array<AlphaMap, kPyramidLevels>& alphas) {
  const FusedFeature& finest = fused[0];
  const int w = finest.feature.width();
  const int h = finest.feature.height();
  if (!finest.valid.SameShape(w, h) || !alphas[0].alpha.SameShape(w, h)) {
    throw Error(ErrorCode::kShapeMismatch, "level-0 inputs differ in size");
  }
  Image rgb(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!finest.valid.at(x, y)) continue;
      const auto f = finest.feature.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        rgb.at(x, y, c) = std::clamp(0.5 * (f[kRed + c] + 1.0), 0.0, 1.0);
      }
    }
  }
  SynthesisResult result;
  result.rgb = PullPushFill(rgb, finest.valid);
  result.alpha.alpha = PullPushFill(alphas[0].alpha, finest.valid);
  for (double& a : result.alpha.alpha.data()) a = std::clamp(a, 0.0, 1.0);
  return result;
}

}  // namespace trisweep
