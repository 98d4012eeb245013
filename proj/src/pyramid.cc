#include "trisweep/pyramid.h"

#include <algorithm>
#include <cmath>

#include "trisweep/error.h"

namespace trisweep {
namespace {

constexpr int kWindowRadius = 2;

int Clamp(int v, int hi) { return std::clamp(v, 0, hi - 1); }

}  // namespace

FeaturePlane ComputeFeatures(const Image& rgb) {
  const int w = rgb.width();
  const int h = rgb.height();
  Image luma(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto p = rgb.pixel(x, y);
      luma.at(x, y) = Luma(p[0], p[1], p[2]);
    }
  }

  FeaturePlane out(w, h, kFeatureChannels);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto p = rgb.pixel(x, y);
      auto f = out.pixel(x, y);
      f[kRed] = 2.0 * p[0] - 1.0;
      f[kGreen] = 2.0 * p[1] - 1.0;
      f[kBlue] = 2.0 * p[2] - 1.0;
      const auto luma_channel = [&](int xx, int yy) {
        return 2.0 * luma.at(Clamp(xx, w), Clamp(yy, h)) - 1.0;
      };
      f[kLuma] = luma_channel(x, y);
      f[kGradX] = 0.5 * (luma_channel(x + 1, y) - luma_channel(x - 1, y));
      f[kGradY] = 0.5 * (luma_channel(x, y + 1) - luma_channel(x, y - 1));

      double sum = 0.0;
      for (int dy = -kWindowRadius; dy <= kWindowRadius; ++dy) {
        for (int dx = -kWindowRadius; dx <= kWindowRadius; ++dx) {
          sum += luma.at(Clamp(x + dx, w), Clamp(y + dy, h));
        }
      }
      constexpr double kCount = (2 * kWindowRadius + 1) * (2 * kWindowRadius + 1);
      const double mean = sum / kCount;
      double var = 0.0;
      for (int dy = -kWindowRadius; dy <= kWindowRadius; ++dy) {
        for (int dx = -kWindowRadius; dx <= kWindowRadius; ++dx) {
          const double d = luma.at(Clamp(x + dx, w), Clamp(y + dy, h)) - mean;
          var += d * d;
        }
      }
      f[kLocalMean] = 2.0 * mean - 1.0;
      f[kLocalStd] = 2.0 * std::sqrt(var / kCount);
    }
  }
  return out;
}

Image DownsampleBox(const Image& image) {
  const int w = (image.width() + 1) / 2;
  const int h = (image.height() + 1) / 2;
  const int c = image.channels();
  Image out(w, h, c);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int k = 0; k < c; ++k) {
        double sum = 0.0;
        int count = 0;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const int xx = 2 * x + dx;
            const int yy = 2 * y + dy;
            if (xx < image.width() && yy < image.height()) {
              sum += image.at(xx, yy, k);
              ++count;
            }
          }
        }
        out.at(x, y, k) = sum / count;
      }
    }
  }
  return out;
}

Mask DownsampleMaskAny(const Mask& mask) {
  const int w = (mask.width() + 1) / 2;
  const int h = (mask.height() + 1) / 2;
  Mask out(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      uint8_t on = 0;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          const int xx = 2 * x + dx;
          const int yy = 2 * y + dy;
          if (xx < mask.width() && yy < mask.height() && mask.at(xx, yy)) on = 1;
        }
      }
      out.at(x, y) = on;
    }
  }
  return out;
}

FeaturePyramid BuildPyramid(const Image& rgb, const Mask& mask) {
  if (rgb.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "pyramid input must be RGB");
  }
  if (!rgb.SameShape(mask)) {
    throw Error(ErrorCode::kSizeMismatch, "image and mask differ in size");
  }
  if (std::min(rgb.width(), rgb.height()) < 64) {
    throw Error(ErrorCode::kTooSmall, "pyramid input must be at least 64 px");
  }
  FeaturePyramid pyramid;
  pyramid.images[0] = rgb;
  pyramid.masks[0] = mask;
  for (int l = 1; l < kPyramidLevels; ++l) {
    pyramid.images[l] = DownsampleBox(pyramid.images[l - 1]);
    pyramid.masks[l] = DownsampleMaskAny(pyramid.masks[l - 1]);
  }
  for (int l = 0; l < kPyramidLevels; ++l) {
    pyramid.features[l] = ComputeFeatures(pyramid.images[l]);
  }
  return pyramid;
}

DepthMap DownsampleDepth(const DepthMap& depth) {
  const int w = (depth.width() + 1) / 2;
  const int h = (depth.height() + 1) / 2;
  DepthMap out{Image(w, h, 1), depth.level + 1};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      int count = 0;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          const int xx = 2 * x + dx;
          const int yy = 2 * y + dy;
          if (xx < depth.width() && yy < depth.height() && depth.valid(xx, yy)) {
            sum += depth.depth.at(xx, yy);
            ++count;
          }
        }
      }
      out.depth.at(x, y) = count ? sum / count : 0.0;
    }
  }
  return out;
}

}  // namespace trisweep
