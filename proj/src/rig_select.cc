#include "trisweep/rig_select.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "trisweep/error.h"

namespace trisweep {

Eigen::Vector3d RigTriangulation::Origin() const {
  return fit.base - config.origin_offset * fit.axis;
}

Eigen::Vector3d RigTriangulation::PlaneCenter() const {
  return fit.base + (fit.height + config.plane_offset) * fit.axis;
}

Eigen::Vector3d RigTriangulation::Lift(const Eigen::Vector2d& uv) const {
  return PlaneCenter() + uv.x() * e1 + uv.y() * e2;
}

CylinderFit FitCylinder(std::span<const Eigen::Vector3d> centers,
                        const Eigen::Vector3d& up_hint, bool pca_axis) {
  if (centers.size() < 3) {
    throw Error(ErrorCode::kDegenerateRig, "need at least 3 camera centers");
  }
  if (!(up_hint.norm() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "up hint must be nonzero");
  }
  Eigen::Vector3d axis = up_hint.normalized();

  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& c : centers) mean += c;
  mean /= static_cast<double>(centers.size());

  if (pca_axis) {
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& c : centers) cov += (c - mean) * (c - mean).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    axis = solver.eigenvectors().col(0).normalized();
    if (axis.dot(up_hint) < 0.0) axis = -axis;
  }

  double min_axial = std::numeric_limits<double>::infinity();
  double max_axial = -std::numeric_limits<double>::infinity();
  for (const auto& c : centers) {
    const double s = c.dot(axis);
    min_axial = std::min(min_axial, s);
    max_axial = std::max(max_axial, s);
  }

  CylinderFit fit;
  fit.axis = axis;
  fit.base = (mean - mean.dot(axis) * axis) + min_axial * axis;
  fit.height = max_axial - min_axial;

  double radius = 0.0;
  for (const auto& c : centers) {
    const Eigen::Vector3d v = c - fit.base;
    radius += (v - v.dot(axis) * axis).norm();
  }
  fit.radius = radius / static_cast<double>(centers.size());
  if (!(fit.radius > 1e-9)) {
    throw Error(ErrorCode::kDegenerateRig, "camera centers lie on the axis");
  }
  return fit;
}

Eigen::Vector3d ProjectRadial(const CylinderFit& fit,
                              const Eigen::Vector3d& p) {
  const Eigen::Vector3d v = p - fit.base;
  const double axial = v.dot(fit.axis);
  const Eigen::Vector3d perp = v - axial * fit.axis;
  const double dist = perp.norm();
  if (!(dist > 1e-9)) {
    throw Error(ErrorCode::kOnAxis, "point lies on the cylinder axis");
  }
  return fit.base + axial * fit.axis + fit.radius * (perp / dist);
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> PlaneBasis(
    const Eigen::Vector3d& axis) {
  int least = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(axis[i]) < std::abs(axis[least])) least = i;
  }
  const Eigen::Vector3d world = Eigen::Vector3d::Unit(least);
  const Eigen::Vector3d e1 = (world - world.dot(axis) * axis).normalized();
  return {e1, axis.cross(e1)};
}

Eigen::Vector2d MapToPlane(const CylinderFit& fit,
                           const ProjectionConfig& config,
                           const Eigen::Vector3d& p_cyl) {
  const Eigen::Vector3d origin = fit.base - config.origin_offset * fit.axis;
  const Eigen::Vector3d plane =
      fit.base + (fit.height + config.plane_offset) * fit.axis;
  const double rise = (p_cyl - origin).dot(fit.axis);
  if (!(rise > 1e-9)) {
    throw Error(ErrorCode::kRayParallelOrDescending,
                "ray from the origin does not ascend toward the plane");
  }
  const double s = (plane - origin).dot(fit.axis) / rise;
  const Eigen::Vector3d hit = origin + s * (p_cyl - origin);
  const auto [e1, e2] = PlaneBasis(fit.axis);
  const Eigen::Vector3d local = hit - plane;
  return {local.dot(e1), local.dot(e2)};
}

std::optional<std::pair<double, Eigen::Vector3d>> RayTriangleIntersect(
    const Ray& ray, const Eigen::Vector3d& v0, const Eigen::Vector3d& v1,
    const Eigen::Vector3d& v2) {
  const Eigen::Vector3d edge1 = v1 - v0;
  const Eigen::Vector3d edge2 = v2 - v0;
  if (!(0.5 * edge1.cross(edge2).norm() > 1e-12)) {
    throw Error(ErrorCode::kDegenerateTriangle, "triangle has no area");
  }
  constexpr double kEps = 1e-9;
  const Eigen::Vector3d pvec = ray.direction.cross(edge2);
  const double det = edge1.dot(pvec);
  // Relative to the triangle scale so the parallel test is unit free.
  if (std::abs(det) < 1e-12 * edge1.norm() * edge2.norm()) return std::nullopt;
  const double inv_det = 1.0 / det;

  const Eigen::Vector3d tvec = ray.origin - v0;
  const double u = tvec.dot(pvec) * inv_det;
  if (u < -kEps || u > 1.0 + kEps) return std::nullopt;
  const Eigen::Vector3d qvec = tvec.cross(edge1);
  const double v = ray.direction.dot(qvec) * inv_det;
  if (v < -kEps || u + v > 1.0 + kEps) return std::nullopt;
  const double t = edge2.dot(qvec) * inv_det;
  if (!(t > 0.0)) return std::nullopt;
  return std::make_pair(t, Eigen::Vector3d(1.0 - u - v, u, v));
}

RigTriangulation TriangulateRig(std::span<const Eigen::Vector3d> centers,
                                const ProjectionConfig& config,
                                const Eigen::Vector3d& up_hint, bool pca_axis) {
  if (!(config.origin_offset > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "origin offset must be positive");
  }
  RigTriangulation tri;
  tri.fit = FitCylinder(centers, up_hint, pca_axis);
  if (!(tri.fit.height + config.origin_offset + config.plane_offset > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "projection plane must lie above the origin");
  }
  tri.config = config;
  std::tie(tri.e1, tri.e2) = PlaneBasis(tri.fit.axis);
  for (const auto& c : centers) {
    Eigen::Vector3d on_surface;
    try {
      on_surface = ProjectRadial(tri.fit, c);
    } catch (const Error& e) {
      throw Error(ErrorCode::kDegenerateRig, e.what());
    }
    tri.points2d.push_back(MapToPlane(tri.fit, config, on_surface));
  }
  tri.faces = Delaunay2D(tri.points2d);
  return tri;
}

RigTriangulation TriangulateRig(std::span<const CameraPose> cameras,
                                const ProjectionConfig& config,
                                const Eigen::Vector3d& up_hint, bool pca_axis) {
  std::vector<Eigen::Vector3d> centers;
  for (const auto& pose : cameras) centers.push_back(CameraCenter(pose));
  return TriangulateRig(centers, config, up_hint, pca_axis);
}

TripletSelection SelectTriplet(const RigTriangulation& tri,
                               const Eigen::Vector3d& query_center) {
  if (tri.faces.empty()) {
    throw Error(ErrorCode::kOutsideCoverage, "triangulation is empty");
  }
  TripletSelection selection;
  try {
    selection.query_point =
        MapToPlane(tri.fit, tri.config, ProjectRadial(tri.fit, query_center));
  } catch (const Error& e) {
    throw Error(ErrorCode::kOutsideCoverage, e.what());
  }
  const Eigen::Vector3d origin = tri.Origin();
  const Ray ray = Ray::Through(origin, tri.Lift(selection.query_point) - origin);

  for (int f = 0; f < static_cast<int>(tri.faces.size()); ++f) {
    const Face& face = tri.faces[f];
    const auto hit =
        RayTriangleIntersect(ray, tri.Lift(tri.points2d[face[0]]),
                             tri.Lift(tri.points2d[face[1]]),
                             tri.Lift(tri.points2d[face[2]]));
    if (!hit) continue;
    Eigen::Vector3d bary = hit->second.cwiseMax(0.0);
    bary /= bary.sum();
    selection.face_index = f;
    selection.face = face;
    selection.bary = bary;
    return selection;
  }
  throw Error(ErrorCode::kOutsideCoverage,
              "query projects outside the camera triangulation");
}

TripletSelection SelectTriplet(const RigTriangulation& tri,
                               const CameraPose& query) {
  return SelectTriplet(tri, CameraCenter(query));
}

TriangleQuality MeasureTriangle(const Eigen::Vector2d& a,
                                const Eigen::Vector2d& b,
                                const Eigen::Vector2d& c) {
  const double la = (b - c).norm();
  const double lb = (c - a).norm();
  const double lc = (a - b).norm();
  TriangleQuality q;
  q.area = 0.5 * std::abs(Orient2d(a, b, c));

  auto angle = [](double opposite, double s1, double s2) {
    const double cosine = (s1 * s1 + s2 * s2 - opposite * opposite) /
                          (2.0 * s1 * s2);
    return std::acos(std::clamp(cosine, -1.0, 1.0));
  };
  const double min_angle =
      std::min({angle(la, lb, lc), angle(lb, lc, la), angle(lc, la, lb)});
  q.min_angle_deg = min_angle * 180.0 / std::numbers::pi;

  const double longest = std::max({la, lb, lc});
  const double shortest_altitude = 2.0 * q.area / longest;
  q.aspect_ratio = shortest_altitude > 0.0
                       ? longest / shortest_altitude
                       : std::numeric_limits<double>::infinity();
  return q;
}

std::vector<TriangleQuality> TriangulationQuality(const RigTriangulation& tri) {
  std::vector<TriangleQuality> quality;
  quality.reserve(tri.faces.size());
  for (const Face& f : tri.faces) {
    quality.push_back(MeasureTriangle(tri.points2d[f[0]], tri.points2d[f[1]],
                                      tri.points2d[f[2]]));
  }
  return quality;
}

}  // namespace trisweep
