#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "trisweep/camera.h"
#include "trisweep/delaunay.h"

namespace trisweep {

struct CylinderFit {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();  // unit
  Eigen::Vector3d base = Eigen::Vector3d::Zero();   // center of bottom cap
  double radius = 1.0;
  double height = 0.0;
};

// Origin of the perspective mapping sits `origin_offset` below the base; the
// projection plane sits `plane_offset` above the top cap.
struct ProjectionConfig {
  double origin_offset = 1.0;
  double plane_offset = 1.0;
};

struct TriangleQuality {
  double min_angle_deg = 0.0;
  double aspect_ratio = 0.0;  // longest edge / shortest altitude
  double area = 0.0;
};

struct RigTriangulation {
  CylinderFit fit;
  ProjectionConfig config;
  Eigen::Vector3d e1 = Eigen::Vector3d::UnitX();
  Eigen::Vector3d e2 = Eigen::Vector3d::UnitY();
  std::vector<Eigen::Vector2d> points2d;  // one per camera
  std::vector<Face> faces;

  Eigen::Vector3d Origin() const;       // o - origin_offset * a
  Eigen::Vector3d PlaneCenter() const;  // o + (h + plane_offset) * a
  Eigen::Vector3d Lift(const Eigen::Vector2d& uv) const;
};

struct TripletSelection {
  int face_index = -1;
  Face face{};
  Eigen::Vector3d bary = Eigen::Vector3d::Zero();
  Eigen::Vector2d query_point = Eigen::Vector2d::Zero();
};

// Axis defaults to `up_hint`; with `pca_axis` the axis becomes the
// smallest-variance direction of the centers, signed along `up_hint`.
// Throws kDegenerateRig for fewer than 3 centers or zero radius.
CylinderFit FitCylinder(std::span<const Eigen::Vector3d> centers,
                        const Eigen::Vector3d& up_hint, bool pca_axis = false);

// Radial normalization onto the cylinder surface. Throws kOnAxis.
Eigen::Vector3d ProjectRadial(const CylinderFit& fit, const Eigen::Vector3d& p);

// Basis of the projection plane: e1 from the world axis least aligned with
// the cylinder axis, e2 = a x e1.
std::pair<Eigen::Vector3d, Eigen::Vector3d> PlaneBasis(
    const Eigen::Vector3d& axis);

// Perspective mapping from the shifted origin onto the projection plane.
// Throws kRayParallelOrDescending when the ray does not ascend along the axis.
Eigen::Vector2d MapToPlane(const CylinderFit& fit,
                           const ProjectionConfig& config,
                           const Eigen::Vector3d& p_cyl);

// Moller-Trumbore. Returns (t, barycentric weights of v0, v1, v2) for hits
// with t > 0. Throws kDegenerateTriangle for area below 1e-12.
std::optional<std::pair<double, Eigen::Vector3d>> RayTriangleIntersect(
    const Ray& ray, const Eigen::Vector3d& v0, const Eigen::Vector3d& v1,
    const Eigen::Vector3d& v2);

// Throws kInvalidArgument for an invalid config, plus FitCylinder,
// ProjectRadial and Delaunay2D errors.
RigTriangulation TriangulateRig(std::span<const Eigen::Vector3d> centers,
                                const ProjectionConfig& config,
                                const Eigen::Vector3d& up_hint =
                                    Eigen::Vector3d::UnitZ(),
                                bool pca_axis = false);

RigTriangulation TriangulateRig(std::span<const CameraPose> cameras,
                                const ProjectionConfig& config,
                                const Eigen::Vector3d& up_hint =
                                    Eigen::Vector3d::UnitZ(),
                                bool pca_axis = false);

// Maps the query center onto the plane, casts a ray from the shifted origin
// through it and returns the first lifted face hit. Throws kOutsideCoverage.
TripletSelection SelectTriplet(const RigTriangulation& tri,
                               const Eigen::Vector3d& query_center);
TripletSelection SelectTriplet(const RigTriangulation& tri,
                               const CameraPose& query);

TriangleQuality MeasureTriangle(const Eigen::Vector2d& a,
                                const Eigen::Vector2d& b,
                                const Eigen::Vector2d& c);
std::vector<TriangleQuality> TriangulationQuality(const RigTriangulation& tri);

// Faces with a minimum angle below this are reported as slivers.
inline constexpr double kSliverAngleDeg = 1.0;

}  // namespace trisweep
