#include <doctest.h>

#include <cmath>

#include "support.h"
#include "trisweep/error.h"
#include "trisweep/metrics.h"

using namespace trisweep;

namespace {

Image FlipX(const Image& in) {
  Image out(in.width(), in.height(), in.channels());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      for (int c = 0; c < in.channels(); ++c) {
        out.at(x, y, c) = in.at(in.width() - 1 - x, y, c);
      }
    }
  }
  return out;
}

Mask FlipX(const Mask& in) {
  Mask out(in.width(), in.height(), 1);
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) out.at(x, y) = in.at(in.width() - 1 - x, y);
  }
  return out;
}

// 16x16 checker with 4 px cells in [0.1, 0.9].
Image Checker16() {
  Image img(16, 16, 1);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) img.at(x, y) = ((x / 4 + y / 4) % 2) * 0.8 + 0.1;
  }
  return img;
}

}  // namespace

TEST_CASE("psnr examples") {
  const Image zero(8, 8, 3, 0.0);
  CHECK(std::isinf(Psnr(zero, zero)));
  CHECK(Psnr(zero, Image(8, 8, 3, 0.1)) == doctest::Approx(20.0));
  CHECK(Psnr(zero, Image(8, 8, 3, 1.0)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(Psnr(zero, Image(8, 9, 3)), Error);
}

TEST_CASE("ssim examples") {
  const Image a = Checker16();
  CHECK(Ssim(a, a) == 1.0);

  Image neg(16, 16, 1);
  for (size_t i = 0; i < a.size(); ++i) neg.data()[i] = 1.0 - a.data()[i];
  const double inverted = Ssim(a, neg);
  CHECK(inverted < 0.5);
  // Reference value from scikit-image structural_similarity with
  // gaussian_weights, sigma 1.5, population covariance, data_range 1.
  CHECK(inverted == doctest::Approx(-0.9118678750579736).epsilon(1e-9));

  // Constant images: (2 m1 m2 + C1) / (m1^2 + m2^2 + C1).
  const double c1 = 1e-4;
  const double expected = (2 * 0.3 * 0.5 + c1) / (0.09 + 0.25 + c1);
  CHECK(Ssim(Image(16, 16, 1, 0.3), Image(16, 16, 1, 0.5)) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.8823875330785064).epsilon(1e-12));

  Image s(20, 24, 1), t(20, 24, 1);
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 20; ++x) {
      s.at(x, y) = 0.5 + 0.4 * std::sin(0.7 * x + 0.3 * y);
      t.at(x, y) = 0.5 + 0.35 * std::sin(0.7 * x + 0.3 * y + 0.5) * std::cos(0.2 * y);
    }
  }
  CHECK(Ssim(s, t) == doctest::Approx(-0.376191434587495).epsilon(1e-9));

  CHECK_THROWS_AS(Ssim(Image(10, 16, 1), Image(10, 16, 1)), Error);
}

TEST_CASE("masked depth mae") {
  DepthMap gt{Image(2, 2, 1, 3.0), 0};
  DepthMap pred = gt;
  const Mask all(2, 2, 1, 1);
  CHECK(MaskedDepthMae(pred, gt, all) == 0.0);
  pred.depth.at(1, 0) += 0.1;
  pred.depth.at(0, 1) -= 0.2;
  pred.depth.at(1, 1) += 0.1;
  CHECK(MaskedDepthMae(pred, gt, all) == doctest::Approx(0.1));
  CHECK_THROWS_AS(MaskedDepthMae(pred, gt, Mask(2, 2, 1, 0)), Error);

  // Full mask equals the plain mean absolute error.
  const Image p = testing::SmoothImage(13, 9, 1);
  const Image g = testing::SmoothImage(13, 9, 1, 0.4);
  DepthMap dp{p, 0}, dg{g, 0};
  for (double& v : dp.depth.data()) v += 1.0;
  for (double& v : dg.depth.data()) v += 1.0;
  double plain = 0.0;
  for (size_t i = 0; i < p.size(); ++i) plain += std::abs(p.data()[i] - g.data()[i]);
  plain /= p.size();
  CHECK(MaskedDepthMae(dp, dg, Mask(13, 9, 1, 1)) == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("offset violation") {
  const double eps = 0.04;
  Image r(1, 1, 1, 0.03);
  const Mask one(1, 1, 1, 1);
  CHECK(OffsetViolation(r, eps, one) == 0.0);
  r.at(0, 0) = eps + 0.01;
  CHECK(OffsetViolation(r, eps, one) == doctest::Approx(0.01));
  r.at(0, 0) = -(eps + 0.02);
  CHECK(OffsetViolation(r, eps, one) == doctest::Approx(0.02));
  CHECK_THROWS_AS(OffsetViolation(r, eps, Mask(1, 1, 1, 0)), Error);
}

TEST_CASE("alpha mse") {
  AlphaMap a{Image(4, 4, 1, 0.0)};
  AlphaMap b{Image(4, 4, 1, 1.0)};
  CHECK(AlphaMse(a, a) == 0.0);
  CHECK(AlphaMse(a, b) == 1.0);
  AlphaMap half = a;
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 4; ++x) half.alpha.at(x, y) = 0.5;
  }
  CHECK(AlphaMse(a, half) == doctest::Approx(0.125));
  CHECK_THROWS_AS(AlphaMse(a, AlphaMap{Image(3, 4, 1)}), Error);
}

TEST_CASE("metrics are symmetric and flip invariant") {
  const Image a = testing::SmoothImage(32, 24, 3);
  const Image b = testing::SmoothImage(32, 24, 3, 0.3);
  CHECK(Psnr(a, b) == Psnr(b, a));
  CHECK(Psnr(FlipX(a), FlipX(b)) == doctest::Approx(Psnr(a, b)).epsilon(1e-12));
  CHECK(Ssim(FlipX(a), FlipX(b)) == doctest::Approx(Ssim(a, b)).epsilon(1e-12));

  DepthMap da{testing::SmoothImage(32, 24, 1), 0};
  DepthMap db{testing::SmoothImage(32, 24, 1, 0.2), 0};
  Mask m(32, 24, 1, 1);
  for (int x = 0; x < 10; ++x) m.at(x, 3) = 0;
  CHECK(MaskedDepthMae(DepthMap{FlipX(da.depth), 0}, DepthMap{FlipX(db.depth), 0},
                       FlipX(m)) ==
        doctest::Approx(MaskedDepthMae(da, db, m)).epsilon(1e-12));
  CHECK(OffsetViolation(FlipX(da.depth), 0.5, FlipX(m)) ==
        doctest::Approx(OffsetViolation(da.depth, 0.5, m)).epsilon(1e-12));
  CHECK(AlphaMse(AlphaMap{FlipX(da.depth)}, AlphaMap{FlipX(db.depth)}) ==
        doctest::Approx(AlphaMse(AlphaMap{da.depth}, AlphaMap{db.depth})).epsilon(1e-12));
}

TEST_CASE("report json") {
  EvalReport r;
  r.psnr = std::numeric_limits<double>::infinity();
  r.ssim = 1.0;
  r.levels[0].depth_mae = 0.01;
  const nlohmann::json j = ReportToJson(r);
  CHECK(j["psnr"] == "inf");
  CHECK(j["lpips"].is_null());
  CHECK(j["levels"].size() == 7);
}
