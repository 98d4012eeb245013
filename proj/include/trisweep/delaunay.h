#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace trisweep {

using Face = std::array<int, 3>;

// Twice the signed area of (a, b, c); positive when counter-clockwise.
double Orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                const Eigen::Vector2d& c);

// Positive when d lies strictly inside the circumcircle of the
// counter-clockwise triangle (a, b, c).
double InCircle(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                const Eigen::Vector2d& c, const Eigen::Vector2d& d);

// Delaunay triangulation of the convex hull of `points`.
//
// Incremental Bowyer-Watson in input order inside a super-triangle spanning
// 100x the bounding box, followed by a hull completion pass and a Lawson flip
// pass. Cocircular quadrilaterals take the diagonal incident to the lowest
// point index. Faces are counter-clockwise, rotated so the smallest index
// leads, and sorted.
//
// Throws kInvalidArgument for fewer than 3 points, kDuplicatePoints when two
// points are closer than 1e-9, kCollinear when all points lie on a line.
std::vector<Face> Delaunay2D(std::span<const Eigen::Vector2d> points);

// Sorted vertices lying on an edge used by exactly one face.
std::vector<int> BoundaryVertices(std::span<const Face> faces);

}  // namespace trisweep
