#include "trisweep/metrics.h"

#include <cmath>
#include <limits>
#include <vector>

#include "trisweep/error.h"

namespace trisweep {
namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;

Image LumaOf(const Image& image) {
  if (image.channels() == 1) return image;
  Image out(image.width(), image.height(), 1);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      out.at(x, y) =
          Luma(image.at(x, y, 0), image.at(x, y, 1), image.at(x, y, 2));
    }
  }
  return out;
}

std::vector<double> GaussianKernel() {
  std::vector<double> k(kSsimWindow);
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - kSsimWindow / 2;
    k[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable Gaussian filter keeping only fully covered windows.
Image FilterValid(const Image& in, const std::vector<double>& k) {
  const int w = in.width() - kSsimWindow + 1;
  const int h = in.height() - kSsimWindow + 1;
  Image rows(w, in.height(), 1);
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = 0; i < kSsimWindow; ++i) s += k[i] * in.at(x + i, y);
      rows.at(x, y) = s;
    }
  }
  Image out(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = 0; i < kSsimWindow; ++i) s += k[i] * rows.at(x, y + i);
      out.at(x, y) = s;
    }
  }
  return out;
}

Image Product(const Image& a, const Image& b) {
  Image out(a.width(), a.height(), 1);
  for (size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * b.data()[i];
  return out;
}

template <typename A, typename B>
void CheckShape(const A& a, const B& b) {
  if (!a.SameShape(b)) {
    throw Error(ErrorCode::kSizeMismatch, "inputs differ in size");
  }
}

}  // namespace

double Psnr(const Image& a, const Image& b) {
  CheckShape(a, b);
  if (a.channels() != b.channels()) {
    throw Error(ErrorCode::kSizeMismatch, "inputs differ in channel count");
  }
  if (a.empty()) throw Error(ErrorCode::kTooSmall, "empty image");
  double sse = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(a.size()) / sse);
}

double Ssim(const Image& a, const Image& b) {
  CheckShape(a, b);
  if (a.channels() != b.channels()) {
    throw Error(ErrorCode::kSizeMismatch, "inputs differ in channel count");
  }
  if (a.width() < kSsimWindow || a.height() < kSsimWindow) {
    throw Error(ErrorCode::kTooSmall, "SSIM needs at least 11x11 pixels");
  }
  constexpr double c1 = (0.01 * 1.0) * (0.01 * 1.0);
  constexpr double c2 = (0.03 * 1.0) * (0.03 * 1.0);
  const auto k = GaussianKernel();
  const Image la = LumaOf(a);
  const Image lb = LumaOf(b);
  if (la == lb) return 1.0;
  const Image mu_a = FilterValid(la, k);
  const Image mu_b = FilterValid(lb, k);
  const Image e_aa = FilterValid(Product(la, la), k);
  const Image e_bb = FilterValid(Product(lb, lb), k);
  const Image e_ab = FilterValid(Product(la, lb), k);
  double sum = 0.0;
  for (size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a.data()[i];
    const double mb = mu_b.data()[i];
    const double va = e_aa.data()[i] - ma * ma;
    const double vb = e_bb.data()[i] - mb * mb;
    const double cov = e_ab.data()[i] - ma * mb;
    sum += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
           ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return sum / static_cast<double>(mu_a.size());
}

double MaskedDepthMae(const DepthMap& pred, const DepthMap& gt,
                      const Mask& mask) {
  CheckShape(pred.depth, gt.depth);
  CheckShape(pred.depth, mask);
  double sum = 0.0;
  size_t count = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      sum += std::abs(pred.depth.at(x, y) - gt.depth.at(x, y));
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::kEmptyMask, "mask has no pixels");
  return sum / static_cast<double>(count);
}

double OffsetViolation(const Image& residual, double epsilon, const Mask& mask) {
  CheckShape(residual, mask);
  double sum = 0.0;
  size_t count = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      sum += std::max(std::abs(residual.at(x, y)) - epsilon, 0.0);
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::kEmptyMask, "mask has no pixels");
  return sum / static_cast<double>(count);
}

double AlphaMse(const AlphaMap& pred, const AlphaMap& gt) {
  CheckShape(pred.alpha, gt.alpha);
  if (pred.alpha.empty()) throw Error(ErrorCode::kTooSmall, "empty alpha map");
  double sum = 0.0;
  for (size_t i = 0; i < pred.alpha.size(); ++i) {
    const double d = pred.alpha.data()[i] - gt.alpha.data()[i];
    sum += d * d;
  }
  return sum / static_cast<double>(pred.alpha.size());
}

Mask JointValidMask(const DepthMap& pred, const DepthMap& gt) {
  CheckShape(pred.depth, gt.depth);
  Mask mask(gt.width(), gt.height(), 1);
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      mask.at(x, y) = pred.valid(x, y) && gt.valid(x, y);
    }
  }
  return mask;
}

nlohmann::json ReportToJson(const EvalReport& report) {
  const auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    if (!v) return nullptr;
    if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
    return *v;
  };
  nlohmann::json doc;
  doc["psnr"] = opt(report.psnr);
  doc["ssim"] = opt(report.ssim);
  doc["lpips"] = nullptr;
  doc["levels"] = nlohmann::json::array();
  for (int l = 0; l < kPyramidLevels; ++l) {
    const auto& lv = report.levels[l];
    doc["levels"].push_back({{"level", l},
                             {"depth_mae", opt(lv.depth_mae)},
                             {"depth_coverage", lv.depth_coverage},
                             {"offset_violation", opt(lv.offset_violation)},
                             {"alpha_mse", opt(lv.alpha_mse)}});
  }
  return doc;
}

}  // namespace trisweep
