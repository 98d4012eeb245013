#pragma once

#include <array>
#include <span>
#include <vector>

#include "trisweep/plane.h"
#include "trisweep/sweep.h"

namespace trisweep {

inline constexpr int kCorrelationGroups = 4;
inline constexpr int kSourceViews = 3;

// Group-wise correlation: channels split into `groups` contiguous groups,
// score_g = mean over the group's channels of a_c * b_c.
// Throws kBadGrouping unless groups > 0 divides the channel count and both
// vectors have the same length.
std::vector<double> GroupCorrelation(std::span<const double> a,
                                     std::span<const double> b, int groups);

// Mean of the group scores, accumulated group by group.
inline double MeanGroupCorrelation(const double* a, const double* b,
                                   int channels, int groups) {
  const int per_group = channels / groups;
  double total = 0.0;
  for (int g = 0; g < groups; ++g) {
    double sum = 0.0;
    for (int c = g * per_group; c < (g + 1) * per_group; ++c) sum += a[c] * b[c];
    total += sum / per_group;
  }
  return total / groups;
}

// Score and validity of one pixel/hypothesis from the three sampled views.
// Only pairs with both members valid contribute; validity is the fraction
// of valid pairs.
inline void AggregatePairs(const std::array<const double*, kSourceViews>& f,
                           const std::array<bool, kSourceViews>& valid,
                           int channels, int groups, double* score,
                           double* validity) {
  constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  double sum = 0.0;
  int count = 0;
  for (const auto& pair : kPairs) {
    if (!valid[pair[0]] || !valid[pair[1]]) continue;
    sum += MeanGroupCorrelation(f[pair[0]], f[pair[1]], channels, groups);
    ++count;
  }
  *score = count ? sum / count : 0.0;
  *validity = count / 3.0;
}

// Per-pixel, per-hypothesis photo-consistency of the three source views.
// Slices are hypothesis-major: index k * width * height + y * width + x.
struct CostVolume {
  int level = 0;
  int width = 0;
  int height = 0;
  int count = 0;
  std::vector<double> score;
  std::vector<double> validity;

  size_t Index(int k, int x, int y) const {
    return (static_cast<size_t>(k) * height + y) * width + x;
  }
};

// warped[view][k] holds view `view` warped at hypothesis k. Throws
// kShapeMismatch when hypothesis counts or plane sizes disagree.
CostVolume BuildCostVolume(
    const std::array<std::vector<WarpedFeature>, kSourceViews>& warped,
    int groups = kCorrelationGroups, int level = 0);

}  // namespace trisweep
