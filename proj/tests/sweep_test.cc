#include <doctest.h>

#include <random>

#include "support.h"
#include "trisweep/error.h"
#include "trisweep/scene.h"
#include "trisweep/sweep.h"

using namespace trisweep;
using trisweep::testing::RandomPose;
using trisweep::testing::TestIntrinsics;

namespace {

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

Eigen::Matrix3d Translation(double dx, double dy) {
  Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
  h(0, 2) = dx;
  h(1, 2) = dy;
  return h;
}

}  // namespace

TEST_CASE("coarse hypotheses") {
  const HypothesisSet set = CoarseHypotheses();
  REQUIRE(set.count() == 32);
  CHECK(set.depths.front() == 0.5);
  CHECK(set.depths.back() == 8.5);
  for (int k = 1; k < 32; ++k) {
    CHECK(set.depths[k] > set.depths[k - 1]);
    CHECK(set.depths[k] - set.depths[k - 1] == doctest::Approx(8.0 / 31.0));
  }
  CHECK(set.level == 6);
}

TEST_CASE("window offsets") {
  const auto l1 = WindowOffsets(1);
  const std::vector<double> expected = {-0.02, -0.01, 0.0, 0.01, 0.02};
  REQUIRE(l1.size() == 5);
  for (int k = 0; k < 5; ++k) CHECK(l1[k] == doctest::Approx(expected[k]));
  CHECK(l1[2] == 0.0);
  CHECK(WindowRadius(0) == 0.01);
  CHECK(WindowRadius(5) == 0.32);
  for (int l = 0; l < 5; ++l) CHECK(WindowRadius(l + 1) / WindowRadius(l) == 2.0);
  for (int l = 0; l <= 5; ++l) {
    const auto off = WindowOffsets(l, 7);
    CHECK(off.front() == -WindowRadius(l));
    CHECK(off.back() == WindowRadius(l));
    for (size_t k = 0; k < off.size(); ++k) CHECK(off[k] == -off[off.size() - 1 - k]);
  }
  CHECK(CodeOf([] { WindowRadius(6); }) == ErrorCode::kLevelOutOfRange);
  CHECK(CodeOf([] { WindowOffsets(-1); }) == ErrorCode::kLevelOutOfRange);
  CHECK(CodeOf([] { WindowOffsets(0, 4); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("homography of identical cameras is identity") {
  const CameraPose pose = LookAt({1, 2, 3}, {0, 0, 0}, Eigen::Vector3d::UnitZ(),
                                 TestIntrinsics());
  for (double d : {0.5, 3.0, 100.0}) {
    Eigen::Matrix3d h = PlaneHomography(pose, pose, d);
    h /= h(2, 2);
    CHECK((h - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(CodeOf([&] { PlaneHomography(pose, pose, 0.0); }) ==
        ErrorCode::kNonPositiveDepth);
}

TEST_CASE("homography of a baseline shift is a disparity") {
  const auto k = TestIntrinsics();
  CameraPose target;
  target.intrinsics = k;
  CameraPose source = target;
  const double b = 0.3;
  source.translation = {-b, 0, 0};  // center at +b along target x
  for (double d : {1.0, 2.5, 7.0}) {
    const Eigen::Matrix3d h = PlaneHomography(source, target, d);
    double su = 0, sv = 0;
    REQUIRE(ApplyHomography(h, 20.0, 30.0, &su, &sv));
    CHECK(su == doctest::Approx(20.0 - k.fx * b / d));
    CHECK(sv == doctest::Approx(30.0));
  }
}

TEST_CASE("homography matches unproject and project") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> px(0.0, 100.0);
  int checked = 0;
  while (checked < 20) {
    const CameraPose s = RandomPose(rng, TestIntrinsics());
    const CameraPose t = RandomPose(rng, TestIntrinsics());
    const Eigen::Matrix3d h = PlaneHomography(s, t, 3.0);
    for (int i = 0; i < 100; ++i) {
      const Eigen::Vector2d p(px(rng), px(rng));
      const Eigen::Vector3d world = Unproject(t, p, 3.0);
      const Eigen::Vector3d cam = s.rotation * world + s.translation;
      if (cam.z() <= 1e-6) continue;
      const Eigen::Vector2d expected = Project(s, world).pixel;
      double su = 0, sv = 0;
      REQUIRE(ApplyHomography(h, p.x(), p.y(), &su, &sv));
      CHECK((Eigen::Vector2d(su, sv) - expected).norm() < 1e-6);
    }
    ++checked;
  }
}

TEST_CASE("warp with identity is bit exact") {
  const Image f = testing::SmoothImage(20, 15, 8);
  Mask m(20, 15, 1, 1);
  m.at(3, 4) = 0;
  const WarpedFeature w = Warp(f, m, Eigen::Matrix3d::Identity(), 20, 15);
  CHECK(w.validity == m);
  for (int y = 0; y < 15; ++y) {
    for (int x = 0; x < 20; ++x) {
      if (!m.at(x, y)) continue;
      for (int c = 0; c < 8; ++c) CHECK(w.feature.at(x, y, c) == f.at(x, y, c));
    }
  }
}

TEST_CASE("warp with an integer translation") {
  const Image f = testing::SmoothImage(12, 9, 2);
  const Mask m(12, 9, 1, 1);
  const WarpedFeature w = Warp(f, m, Translation(2.0, 0.0), 12, 9);
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 12; ++x) {
      if (x >= 10) {
        CHECK_FALSE(w.validity.at(x, y));
        CHECK(w.feature.at(x, y, 0) == 0.0);
      } else {
        REQUIRE(w.validity.at(x, y));
        CHECK(w.feature.at(x, y, 1) == f.at(x + 2, y, 1));
      }
    }
  }
}

TEST_CASE("warp with a half pixel shift averages across a step") {
  Image f(8, 4, 1, 0.0);
  for (int y = 0; y < 4; ++y) {
    for (int x = 4; x < 8; ++x) f.at(x, y) = 1.0;
  }
  const WarpedFeature w = Warp(f, Mask(8, 4, 1, 1), Translation(0.5, 0.0), 8, 4);
  CHECK(w.feature.at(3, 1) == doctest::Approx(0.5));
  CHECK(w.feature.at(2, 1) == 0.0);
  CHECK(w.feature.at(4, 1) == 1.0);
}

TEST_CASE("warp rejects singular homographies") {
  CHECK(CodeOf([] {
          Warp(Image(4, 4, 1), Mask(4, 4, 1), Eigen::Matrix3d::Zero(), 4, 4);
        }) == ErrorCode::kSingularHomography);
}

TEST_CASE("warp round trip on integer translations") {
  const Image f = testing::SmoothImage(16, 16, 3);
  const Mask m(16, 16, 1, 1);
  const Eigen::Matrix3d h = Translation(3.0, -2.0);
  const WarpedFeature there = Warp(f, m, h, 16, 16);
  const WarpedFeature back = Warp(there.feature, there.validity, h.inverse(), 16, 16);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      if (!back.validity.at(x, y)) continue;
      for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(back.feature.at(x, y, c) - f.at(x, y, c)) < 1e-4);
      }
    }
  }
}

TEST_CASE("warping a rendered fronto-parallel plane reproduces the target") {
  SceneSpec scene;
  scene.ground = GroundPlane{};
  scene.ground->extent = {-20, 20, -20, 20};
  const CameraIntrinsics k = IntrinsicsFromFov(128, 128, std::numbers::pi / 3);
  const double d = 3.0;
  const CameraPose target = testing::DownLooking({0, 0, d}, k);
  // Baseline chosen for an exact 8 px disparity.
  const double b = 8.0 * d / k.fx;
  const CameraPose source = testing::DownLooking({b, 0, d}, k);
  const RenderResult t = Render(scene, target);
  const RenderResult s = Render(scene, source);
  const WarpedFeature w = Warp(s.rgb, s.mask, PlaneHomography(source, target, d),
                               k.width, k.height);
  double err = 0.0;
  int n = 0;
  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      if (!w.validity.at(x, y)) continue;
      for (int c = 0; c < 3; ++c) err += std::abs(w.feature.at(x, y, c) - t.rgb.at(x, y, c));
      n += 3;
    }
  }
  REQUIRE(n > 0);
  CHECK(err / n < 1e-3);
}
