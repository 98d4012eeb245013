#include <doctest.h>

#include <random>

#include "support.h"
#include "trisweep/camera.h"
#include "trisweep/error.h"

using namespace trisweep;
using trisweep::testing::RandomPose;
using trisweep::testing::RandomRotation;
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

CameraPose Identity() {
  CameraPose pose;
  pose.intrinsics = TestIntrinsics();
  return pose;
}

std::array<CameraPose, 3> CircleTriplet() {
  const auto k = TestIntrinsics();
  std::array<CameraPose, 3> out;
  for (int i = 0; i < 3; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 3.0;
    out[i] = LookAt({3.0 * std::cos(a), 3.0 * std::sin(a), 1.0}, {0, 0, 1},
                    Eigen::Vector3d::UnitZ(), k);
  }
  return out;
}

}  // namespace

TEST_CASE("project principal axis point") {
  const auto p = Project(Identity(), {0, 0, 2});
  CHECK(p.pixel.x() == doctest::Approx(50.0));
  CHECK(p.pixel.y() == doctest::Approx(50.0));
  CHECK(p.depth == 2.0);
}

TEST_CASE("project off-axis point") {
  const auto p = Project(Identity(), {1, 0, 2});
  CHECK(p.pixel.x() == doctest::Approx(100.0));
  CHECK(p.pixel.y() == doctest::Approx(50.0));
  CHECK(p.depth == 2.0);
}

TEST_CASE("project behind camera") {
  CHECK(CodeOf([] { Project(Identity(), {0, 0, -1}); }) ==
        ErrorCode::kBehindCamera);
}

TEST_CASE("unproject examples") {
  const Eigen::Vector3d p = Unproject(Identity(), {50, 50}, 3.0);
  CHECK((p - Eigen::Vector3d(0, 0, 3)).norm() < 1e-12);
  CHECK(CodeOf([] { Unproject(Identity(), {50, 50}, 0.0); }) ==
        ErrorCode::kNonPositiveDepth);
}

TEST_CASE("project unproject round trip") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> px(0.0, 100.0);
  std::uniform_real_distribution<double> dz(0.1, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const CameraPose pose = RandomPose(rng, TestIntrinsics());
    const Eigen::Vector2d pixel(px(rng), px(rng));
    const double d = dz(rng);
    const auto back = Project(pose, Unproject(pose, pixel, d));
    CHECK((back.pixel - pixel).norm() < 1e-9);
    CHECK(std::abs(back.depth - d) < 1e-9);
  }
}

TEST_CASE("camera center") {
  CameraPose pose = Identity();
  pose.translation = {0, 0, -3};
  CHECK((CameraCenter(pose) - Eigen::Vector3d(0, 0, 3)).norm() == 0.0);
  CHECK(CameraCenter(Identity()).norm() == 0.0);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const CameraPose r = RandomPose(rng, TestIntrinsics());
    CHECK((r.rotation * CameraCenter(r) + r.translation).norm() < 1e-12);
  }
}

TEST_CASE("intrinsics scale per level") {
  const CameraIntrinsics k = IntrinsicsFromFov(256, 256, std::numbers::pi / 3);
  const CameraIntrinsics k2 = k.AtLevel(2);
  CHECK(k2.width == 64);
  CHECK(k2.height == 64);
  CHECK(k2.fx == doctest::Approx(k.fx / 4));
  CHECK(k2.cx == doctest::Approx(32.0));
}

TEST_CASE("interpolate pose at a vertex") {
  const auto tri = CircleTriplet();
  for (int v = 0; v < 3; ++v) {
    Eigen::Vector3d bary = Eigen::Vector3d::Zero();
    bary[v] = 1.0;
    const CameraPose p = InterpolatePose(tri, bary, 0.0);
    CHECK((p.rotation - tri[v].rotation).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((p.translation - tri[v].translation).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("interpolate pose centroid") {
  const auto tri = CircleTriplet();
  const Eigen::Vector3d third = Eigen::Vector3d::Constant(1.0 / 3.0);
  const CameraPose p = InterpolatePose(tri, third, 0.0);
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& c : tri) centroid += CameraCenter(c) / 3.0;
  CHECK((CameraCenter(p) - centroid).norm() < 1e-9);
  CHECK(p.intrinsics == tri[0].intrinsics);
}

TEST_CASE("interpolate pose matches quaternion blend oracle") {
  const auto tri = CircleTriplet();
  const Eigen::Vector3d bary(0.2, 0.3, 0.5);
  const CameraPose p = InterpolatePose(tri, bary, 0.1);

  // Independent oracle: blend via Eigen's slerp-free quaternion sum.
  Eigen::Quaterniond q0(tri[0].rotation);
  Eigen::Vector4d sum = Eigen::Vector4d::Zero();
  for (int i = 0; i < 3; ++i) {
    Eigen::Quaterniond q(tri[i].rotation);
    if (q.dot(q0) < 0) q = Eigen::Quaterniond(-q.coeffs());
    sum += bary[i] * q.coeffs();
  }
  Eigen::Quaterniond expected;
  expected.coeffs() = sum.normalized();
  const Eigen::Matrix3d r = expected.toRotationMatrix();
  CHECK((p.rotation - r).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((p.rotation.transpose() * p.rotation - Eigen::Matrix3d::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-9);
  CHECK(std::abs(p.rotation.determinant() - 1.0) < 1e-9);

  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  for (int i = 0; i < 3; ++i) center += bary[i] * CameraCenter(tri[i]);
  center += 0.1 * r.row(2).transpose();
  CHECK((CameraCenter(p) - center).norm() < 1e-9);
}

TEST_CASE("interpolate pose rejects bad weights") {
  const auto tri = CircleTriplet();
  CHECK(CodeOf([&] { InterpolatePose(tri, {0.5, 0.5, 0.1}, 0.0); }) ==
        ErrorCode::kDegenerateWeights);
  CHECK(CodeOf([&] { InterpolatePose(tri, {1.1, -0.1, 0.0}, 0.0); }) ==
        ErrorCode::kDegenerateWeights);
}

TEST_CASE("interpolate pose stays orthonormal under fuzz") {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(1.0);
  for (int i = 0; i < 500; ++i) {
    std::array<CameraPose, 3> tri;
    for (auto& c : tri) c = RandomPose(rng, TestIntrinsics());
    Eigen::Vector3d w(e(rng), e(rng), e(rng));
    w /= w.sum();
    const CameraPose p = InterpolatePose(tri, w, 0.0);
    CHECK((p.rotation.transpose() * p.rotation - Eigen::Matrix3d::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    CHECK(std::abs(p.rotation.determinant() - 1.0) < 1e-9);
  }
}

TEST_CASE("look-at points the optical axis at the target") {
  const CameraPose pose = LookAt({3, 1, 2}, {0, 0, 1}, Eigen::Vector3d::UnitZ(),
                                 TestIntrinsics());
  const Eigen::Vector3d dir = (Eigen::Vector3d(0, 0, 1) - Eigen::Vector3d(3, 1, 2))
                                  .normalized();
  CHECK((OpticalAxis(pose) - dir).norm() < 1e-12);
  CHECK_NOTHROW(pose.Validate());
}
