#include "trisweep/correlation.h"

#include "trisweep/error.h"

namespace trisweep {

std::vector<double> GroupCorrelation(std::span<const double> a,
                                     std::span<const double> b, int groups) {
  if (a.size() != b.size() || groups <= 0 || a.size() % groups != 0 ||
      a.empty()) {
    throw Error(ErrorCode::kBadGrouping,
                "channel count must be a positive multiple of the group count");
  }
  const int per_group = static_cast<int>(a.size()) / groups;
  std::vector<double> scores(groups);
  for (int g = 0; g < groups; ++g) {
    double sum = 0.0;
    for (int c = g * per_group; c < (g + 1) * per_group; ++c) sum += a[c] * b[c];
    scores[g] = sum / per_group;
  }
  return scores;
}

CostVolume BuildCostVolume(
    const std::array<std::vector<WarpedFeature>, kSourceViews>& warped,
    int groups, int level) {
  const size_t count = warped[0].size();
  if (count == 0) throw Error(ErrorCode::kShapeMismatch, "no hypotheses");
  const auto& first = warped[0][0];
  const int w = first.feature.width();
  const int h = first.feature.height();
  const int channels = first.feature.channels();
  if (groups <= 0 || channels % groups != 0) {
    throw Error(ErrorCode::kBadGrouping, "channels not divisible by groups");
  }
  for (const auto& view : warped) {
    if (view.size() != count) {
      throw Error(ErrorCode::kShapeMismatch, "hypothesis counts differ");
    }
    for (const auto& slice : view) {
      if (!slice.feature.SameShape(w, h) || !slice.validity.SameShape(w, h) ||
          slice.feature.channels() != channels) {
        throw Error(ErrorCode::kShapeMismatch, "warped plane sizes differ");
      }
    }
  }

  CostVolume volume;
  volume.level = level;
  volume.width = w;
  volume.height = h;
  volume.count = static_cast<int>(count);
  volume.score.assign(count * w * h, 0.0);
  volume.validity.assign(count * w * h, 0.0);
  for (int k = 0; k < volume.count; ++k) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        std::array<const double*, kSourceViews> f;
        std::array<bool, kSourceViews> valid;
        for (int v = 0; v < kSourceViews; ++v) {
          f[v] = warped[v][k].feature.pixel(x, y).data();
          valid[v] = warped[v][k].validity.at(x, y) != 0;
        }
        const size_t i = volume.Index(k, x, y);
        AggregatePairs(f, valid, channels, groups, &volume.score[i],
                       &volume.validity[i]);
      }
    }
  }
  return volume;
}

}  // namespace trisweep
