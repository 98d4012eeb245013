#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "support.h"
#include "trisweep/delaunay.h"
#include "trisweep/error.h"
#include "trisweep/rig_select.h"
#include "trisweep/scene.h"

using namespace trisweep;

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

// Brute-force empty-circumcircle check via explicit circumcenters.
bool EmptyCircumcircles(std::span<const Eigen::Vector2d> pts,
                        std::span<const Face> faces) {
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  for (const auto& f : faces) {
    const Eigen::Vector2d a = pts[f[0]], b = pts[f[1]], c = pts[f[2]];
    const double d = 2.0 * (a.x() * (b.y() - c.y()) + b.x() * (c.y() - a.y()) +
                            c.x() * (a.y() - b.y()));
    if (d == 0.0) return false;
    const Eigen::Vector2d center(
        (a.squaredNorm() * (b.y() - c.y()) + b.squaredNorm() * (c.y() - a.y()) +
         c.squaredNorm() * (a.y() - b.y())) / d,
        (a.squaredNorm() * (c.x() - b.x()) + b.squaredNorm() * (a.x() - c.x()) +
         c.squaredNorm() * (b.x() - a.x())) / d);
    const double r2 = (a - center).squaredNorm();
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
      if (i == f[0] || i == f[1] || i == f[2]) continue;
      if ((pts[i] - center).squaredNorm() < r2 - 1e-9 * scale * scale) {
        return false;
      }
    }
  }
  return true;
}

double Area(std::span<const Eigen::Vector2d> pts, const Face& f) {
  return 0.5 * Orient2d(pts[f[0]], pts[f[1]], pts[f[2]]);
}

std::vector<Eigen::Vector3d> Ring(int n, double r, double z,
                                  double phase = 0.0) {
  std::vector<Eigen::Vector3d> out;
  for (int i = 0; i < n; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * i / n;
    out.emplace_back(r * std::cos(a), r * std::sin(a), z);
  }
  return out;
}

}  // namespace

TEST_CASE("fit cylinder to a single ring") {
  const auto centers = Ring(8, 2.0, 1.0);
  const CylinderFit fit = FitCylinder(centers, Eigen::Vector3d::UnitZ());
  CHECK((fit.axis - Eigen::Vector3d::UnitZ()).norm() < 1e-12);
  CHECK(fit.radius == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.height == doctest::Approx(0.0));
  CHECK((fit.base - Eigen::Vector3d(0, 0, 1)).norm() < 1e-9);
}

TEST_CASE("fit cylinder to two rings") {
  auto centers = Ring(8, 2.0, 1.0);
  const auto upper = Ring(8, 2.0, 2.0, 0.3);
  centers.insert(centers.end(), upper.begin(), upper.end());
  const CylinderFit fit = FitCylinder(centers, Eigen::Vector3d::UnitZ());
  CHECK(fit.radius == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.height == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((fit.base - Eigen::Vector3d(0, 0, 1)).norm() < 1e-9);
}

TEST_CASE("fit cylinder rejects centers on the axis") {
  std::vector<Eigen::Vector3d> centers = {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}};
  CHECK(CodeOf([&] { FitCylinder(centers, Eigen::Vector3d::UnitZ()); }) ==
        ErrorCode::kDegenerateRig);
}

TEST_CASE("project radial") {
  CylinderFit fit;
  fit.radius = 2.0;
  CHECK((ProjectRadial(fit, {4, 0, 1}) - Eigen::Vector3d(2, 0, 1)).norm() < 1e-12);
  CHECK((ProjectRadial(fit, {2, 0, 1}) - Eigen::Vector3d(2, 0, 1)).norm() < 1e-12);
  CHECK(CodeOf([&] { ProjectRadial(fit, {0, 0, 5}); }) == ErrorCode::kOnAxis);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d p(u(rng), u(rng), u(rng));
    const Eigen::Vector3d once = ProjectRadial(fit, p);
    CHECK((ProjectRadial(fit, once) - once).norm() < 1e-12);
    CHECK(once.head<2>().norm() == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("map to plane examples") {
  CylinderFit fit;
  fit.radius = 2.0;
  const ProjectionConfig config{1.0, 1.0};
  const Eigen::Vector2d uv = MapToPlane(fit, config, {2, 0, 0});
  // Ray from (0,0,-1) through (2,0,0) meets z = 1 at (4,0,1).
  const auto [e1, e2] = PlaneBasis(fit.axis);
  const Eigen::Vector3d hit(4, 0, 1);
  CHECK(uv.x() == doctest::Approx(hit.dot(e1)));
  CHECK(uv.y() == doctest::Approx(hit.dot(e2)));
  CHECK(uv.norm() == doctest::Approx(4.0));

  CHECK(CodeOf([&] {
          MapToPlane(fit, config, Eigen::Vector3d(0, 0, -1));
        }) == ErrorCode::kRayParallelOrDescending);
}

TEST_CASE("map to plane scales the top rim by similar triangles") {
  CylinderFit fit;
  fit.radius = 1.5;
  fit.height = 2.0;
  const ProjectionConfig config{0.7, 1.3};
  const Eigen::Vector3d rim(1.5 * std::cos(0.4), 1.5 * std::sin(0.4), 2.0);
  const double expected = 1.5 * (2.0 + 0.7 + 1.3) / (2.0 + 0.7);
  CHECK(MapToPlane(fit, config, rim).norm() == doctest::Approx(expected));
}

TEST_CASE("map to plane commutes with rotation about the axis") {
  CylinderFit fit;
  fit.radius = 2.0;
  fit.height = 1.0;
  const ProjectionConfig config{1.0, 1.0};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::uniform_real_distribution<double> z(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double a = ang(rng);
    const double theta = ang(rng);
    const Eigen::Vector3d p(2 * std::cos(a), 2 * std::sin(a), z(rng));
    const Eigen::Vector3d q =
        Eigen::AngleAxisd(theta, Eigen::Vector3d::UnitZ()) * p;
    const Eigen::Vector2d up = MapToPlane(fit, config, p);
    const Eigen::Vector2d uq = MapToPlane(fit, config, q);
    const Eigen::Vector2d rotated = Eigen::Rotation2Dd(theta) * up;
    CHECK((uq - rotated).norm() < 1e-9);
  }
}

TEST_CASE("delaunay unit square breaks the tie at the lowest index") {
  const std::vector<Eigen::Vector2d> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto faces = Delaunay2D(pts);
  REQUIRE(faces.size() == 2);
  for (const auto& f : faces) {
    CHECK(std::find(f.begin(), f.end(), 0) != f.end());
    CHECK(std::find(f.begin(), f.end(), 2) != f.end());
    CHECK(Area(pts, f) > 0.0);
  }
}

TEST_CASE("delaunay three points") {
  const std::vector<Eigen::Vector2d> pts = {{0, 0}, {1, 0}, {0.3, 2}};
  const auto faces = Delaunay2D(pts);
  REQUIRE(faces.size() == 1);
  CHECK(Area(pts, faces[0]) > 0.0);
}

TEST_CASE("delaunay errors") {
  const std::vector<Eigen::Vector2d> line = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK(CodeOf([&] { Delaunay2D(line); }) == ErrorCode::kCollinear);
  const std::vector<Eigen::Vector2d> dup = {{0, 0}, {1, 0}, {0, 1}, {1, 0}};
  CHECK(CodeOf([&] { Delaunay2D(dup); }) == ErrorCode::kDuplicatePoints);
}

TEST_CASE("delaunay random sets satisfy the empty circumcircle property") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> count(3, 50);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Eigen::Vector2d> pts(count(rng));
    for (auto& p : pts) p = {u(rng), u(rng)};
    const auto faces = Delaunay2D(pts);
    CHECK(EmptyCircumcircles(pts, faces));
    for (const auto& f : faces) CHECK(Area(pts, f) > 0.0);
    // Euler: F = 2n - 2 - h for a triangulated convex hull.
    const int h = static_cast<int>(BoundaryVertices(faces).size());
    CHECK(static_cast<int>(faces.size()) == 2 * static_cast<int>(pts.size()) - 2 - h);
    CHECK(Delaunay2D(pts) == faces);
  }
}

TEST_CASE("ray triangle intersection") {
  const Eigen::Vector3d v0(-1, -1, 2), v1(1, -1, 2), v2(0, 1, 2);
  const auto hit = RayTriangleIntersect(Ray::Through({0, 0, 0}, {0, 0, 1}), v0,
                                        v1, v2);
  REQUIRE(hit);
  CHECK(hit->first == doctest::Approx(2.0));
  CHECK(hit->second.sum() == doctest::Approx(1.0).epsilon(1e-12));
  const Eigen::Vector3d p = hit->second[0] * v0 + hit->second[1] * v1 +
                            hit->second[2] * v2;
  CHECK((p - Eigen::Vector3d(0, 0, 2)).norm() < 1e-9);

  const auto corner = RayTriangleIntersect(Ray::Through({0, 0, 0}, v0), v0, v1, v2);
  REQUIRE(corner);
  CHECK((corner->second - Eigen::Vector3d(1, 0, 0)).norm() < 1e-9);

  CHECK_FALSE(RayTriangleIntersect(Ray::Through({0, 0, 0}, {1, 0, 0}), v0, v1, v2));
  CHECK(CodeOf([&] {
          RayTriangleIntersect(Ray::Through({0, 0, 0}, {0, 0, 1}), v0, v0, v2);
        }) == ErrorCode::kDegenerateTriangle);
}

TEST_CASE("triangle quality") {
  const auto eq = MeasureTriangle({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2});
  CHECK(eq.min_angle_deg == doctest::Approx(60.0).epsilon(1e-9));
  CHECK(eq.aspect_ratio == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-9));
  const auto thin = MeasureTriangle({0, 0}, {1, 0}, {0.5, 1e-3});
  CHECK(thin.min_angle_deg < 0.2);
}

TEST_CASE("canonical rig triangulation") {
  const auto rig = CanonicalRig();
  const RigTriangulation tri = TriangulateRig(std::span<const CameraPose>(rig), {});
  CHECK(EmptyCircumcircles(tri.points2d, tri.faces));
  const int h = static_cast<int>(BoundaryVertices(tri.faces).size());
  CHECK(static_cast<int>(tri.faces.size()) == 2 * 16 - 2 - h);

  // Tight projection offsets give fatter triangles.
  auto mean_min_angle = [&](double o, double p) {
    const auto t = TriangulateRig(std::span<const CameraPose>(rig), {o, p});
    double sum = 0.0;
    for (const auto& q : TriangulationQuality(t)) sum += q.min_angle_deg;
    return sum / t.faces.size();
  };
  CHECK(mean_min_angle(1, 1) > mean_min_angle(10, 10));
}

TEST_CASE("select triplet at a rig camera and at a face centroid") {
  const auto rig = CanonicalRig();
  const RigTriangulation tri = TriangulateRig(std::span<const CameraPose>(rig), {});
  const int cam = 3;
  const TripletSelection at_cam = SelectTriplet(tri, rig[cam]);
  const auto it = std::find(at_cam.face.begin(), at_cam.face.end(), cam);
  REQUIRE(it != at_cam.face.end());
  CHECK(at_cam.bary[it - at_cam.face.begin()] == doctest::Approx(1.0).epsilon(1e-9));

  for (size_t f = 0; f < tri.faces.size(); ++f) {
    const Face& face = tri.faces[f];
    const Eigen::Vector2d c =
        (tri.points2d[face[0]] + tri.points2d[face[1]] + tri.points2d[face[2]]) / 3.0;
    // The ray from the origin through the lifted centroid meets the cylinder
    // surface at a point that maps back to c.
    const Eigen::Vector3d lifted = tri.Lift(c);
    const Eigen::Vector3d origin = tri.Origin();
    const Eigen::Vector3d query =
        origin + tri.fit.radius / c.norm() * (lifted - origin);
    const TripletSelection sel = SelectTriplet(tri, query);
    CHECK(sel.face_index == static_cast<int>(f));
    CHECK((sel.bary - Eigen::Vector3d::Constant(1.0 / 3.0)).norm() < 1e-9);
  }
}

TEST_CASE("select triplet outside the hull") {
  const auto rig = CanonicalRig();
  const RigTriangulation tri = TriangulateRig(std::span<const CameraPose>(rig), {});
  // Below the lower ring projects beyond the outer hull.
  CHECK(CodeOf([&] { SelectTriplet(tri, Eigen::Vector3d(4, 0, 0.1)); }) ==
        ErrorCode::kOutsideCoverage);
}

TEST_CASE("triangulate rejects duplicate centers") {
  std::vector<Eigen::Vector3d> centers = Ring(6, 2.0, 1.0);
  centers.push_back(centers[2]);
  CHECK(CodeOf([&] {
          TriangulateRig(std::span<const Eigen::Vector3d>(centers), {});
        }) == ErrorCode::kDuplicatePoints);
}
