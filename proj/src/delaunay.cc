#include "trisweep/delaunay.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "trisweep/error.h"

namespace trisweep {
namespace {

// Predicates run on coordinates normalized to the unit bounding box, so a
// fixed absolute tolerance is scale free.
constexpr double kOrientEps = 1e-12;
constexpr double kInCircleEps = 1e-12;
constexpr double kSuperScale = 100.0;

using Edge = std::pair<int, int>;

struct Mesh {
  std::vector<Eigen::Vector2d> pts;
  std::vector<Face> faces;

  double Orient(int a, int b, int c) const {
    return Orient2d(pts[a], pts[b], pts[c]);
  }
  double Circle(const Face& f, int d) const {
    return InCircle(pts[f[0]], pts[f[1]], pts[f[2]], pts[d]);
  }

  // Directed edge -> face index.
  std::map<Edge, int> EdgeMap() const {
    std::map<Edge, int> edges;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      for (int e = 0; e < 3; ++e) {
        edges[{faces[f][e], faces[f][(e + 1) % 3]}] = f;
      }
    }
    return edges;
  }
};

void Insert(Mesh& mesh, int p) {
  // Seed the cavity with every face containing p (two when p is on an edge).
  std::vector<char> in_cavity(mesh.faces.size(), 0);
  std::vector<int> stack;
  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    const Face& t = mesh.faces[f];
    const double score = std::min({mesh.Orient(t[0], t[1], p),
                                   mesh.Orient(t[1], t[2], p),
                                   mesh.Orient(t[2], t[0], p)});
    if (score >= -kOrientEps) {
      in_cavity[f] = 1;
      stack.push_back(f);
    }
    if (score > best_score) {
      best_score = score;
      best = f;
    }
  }
  if (stack.empty()) {
    in_cavity[best] = 1;
    stack.push_back(best);
  }

  // Grow through neighbors whose circumcircle strictly contains p. Growing
  // by adjacency keeps the cavity connected and star-shaped around p.
  const auto edges = mesh.EdgeMap();
  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    const Face t = mesh.faces[f];
    for (int e = 0; e < 3; ++e) {
      const auto it = edges.find({t[(e + 1) % 3], t[e]});
      if (it == edges.end() || in_cavity[it->second]) continue;
      if (mesh.Circle(mesh.faces[it->second], p) > kInCircleEps) {
        in_cavity[it->second] = 1;
        stack.push_back(it->second);
      }
    }
  }

  std::vector<Edge> boundary;
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    if (!in_cavity[f]) continue;
    const Face& t = mesh.faces[f];
    for (int e = 0; e < 3; ++e) {
      const int a = t[e];
      const int b = t[(e + 1) % 3];
      const auto it = edges.find({b, a});
      if (it == edges.end() || !in_cavity[it->second]) boundary.push_back({a, b});
    }
  }

  std::vector<Face> kept;
  kept.reserve(mesh.faces.size() + 2);
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    if (!in_cavity[f]) kept.push_back(mesh.faces[f]);
  }
  for (const auto& [a, b] : boundary) {
    if (mesh.Orient(a, b, p) > kOrientEps) kept.push_back({a, b, p});
  }
  mesh.faces = std::move(kept);
}

bool SegmentsCross(const Mesh& mesh, int a, int b, int c, int d) {
  if (a == c || a == d || b == c || b == d) return false;
  const double o1 = mesh.Orient(a, b, c);
  const double o2 = mesh.Orient(a, b, d);
  const double o3 = mesh.Orient(c, d, a);
  const double o4 = mesh.Orient(c, d, b);
  return ((o1 > kOrientEps && o2 < -kOrientEps) ||
          (o1 < -kOrientEps && o2 > kOrientEps)) &&
         ((o3 > kOrientEps && o4 < -kOrientEps) ||
          (o3 < -kOrientEps && o4 > kOrientEps));
}

// Removing super-triangle faces can leave concave notches along the hull.
// Clip ears off those notches until the boundary is convex.
void CompleteHull(Mesh& mesh, int n) {
  bool changed = true;
  while (changed) {
    changed = false;
    const auto edges = mesh.EdgeMap();
    std::vector<Edge> boundary;
    for (const auto& [edge, face] : edges) {
      if (!edges.count({edge.second, edge.first})) boundary.push_back(edge);
    }
    for (const auto& [a, b] : boundary) {
      for (const auto& [b2, c] : boundary) {
        if (b2 != b || c == a) continue;
        if (mesh.Orient(a, b, c) >= -kOrientEps) continue;
        // Candidate face (a, c, b) fills the notch at b.
        bool blocked = false;
        for (int q = 0; q < n && !blocked; ++q) {
          if (q == a || q == b || q == c) continue;
          blocked = mesh.Orient(a, c, q) >= -kOrientEps &&
                    mesh.Orient(c, b, q) >= -kOrientEps &&
                    mesh.Orient(b, a, q) >= -kOrientEps;
        }
        for (const auto& [edge, face] : edges) {
          if (blocked) break;
          blocked = SegmentsCross(mesh, a, c, edge.first, edge.second);
        }
        if (blocked) continue;
        mesh.faces.push_back({a, c, b});
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
}

void LawsonFlips(Mesh& mesh, int n) {
  const int max_passes = 10 * n * n + 100;
  for (int pass = 0; pass < max_passes; ++pass) {
    bool flipped = false;
    const auto edges = mesh.EdgeMap();
    std::vector<char> touched(mesh.faces.size(), 0);
    for (const auto& [edge, f1] : edges) {
      const auto [a, b] = edge;
      if (a > b) continue;
      const auto it = edges.find({b, a});
      if (it == edges.end()) continue;
      const int f2 = it->second;
      if (touched[f1] || touched[f2]) continue;

      const Face& t1 = mesh.faces[f1];
      const Face& t2 = mesh.faces[f2];
      int c = -1;
      int d = -1;
      for (int v : t1) if (v != a && v != b) c = v;
      for (int v : t2) if (v != a && v != b) d = v;

      // Rotate t1 to (a, b, c) order for the in-circle test.
      const Face abc = {a, b, c};
      const double in = mesh.Circle(abc, d);
      bool flip = in > kInCircleEps;
      if (!flip && in >= -kInCircleEps && std::min(c, d) < std::min(a, b)) {
        flip = mesh.Orient(c, a, d) > kOrientEps &&
               mesh.Orient(d, b, c) > kOrientEps;
      }
      if (!flip) continue;
      mesh.faces[f1] = {c, a, d};
      mesh.faces[f2] = {d, b, c};
      touched[f1] = touched[f2] = 1;
      flipped = true;
    }
    if (!flipped) return;
  }
}

}  // namespace

double Orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                const Eigen::Vector2d& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

double InCircle(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
         clift * (adx * bdy - bdx * ady);
}

std::vector<Face> Delaunay2D(std::span<const Eigen::Vector2d> points) {
  const int n = static_cast<int>(points.size());
  if (n < 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "triangulation needs at least 3 points");
  }
  for (int i = 0; i < n; ++i) {
    if (!points[i].allFinite()) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite point");
    }
    for (int j = i + 1; j < n; ++j) {
      if ((points[i] - points[j]).norm() < 1e-9) {
        throw Error(ErrorCode::kDuplicatePoints,
                    "points " + std::to_string(i) + " and " +
                        std::to_string(j) + " coincide");
      }
    }
  }

  Eigen::Vector2d lo = points[0];
  Eigen::Vector2d hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Eigen::Vector2d mid = 0.5 * (lo + hi);
  const double extent = (hi - lo).maxCoeff();

  Mesh mesh;
  mesh.pts.reserve(n + 3);
  for (const auto& p : points) mesh.pts.push_back((p - mid) / extent);

  // Collinear check: farthest point from the first, then largest offset from
  // that line.
  int far = 1;
  for (int i = 1; i < n; ++i) {
    if ((mesh.pts[i] - mesh.pts[0]).norm() > (mesh.pts[far] - mesh.pts[0]).norm())
      far = i;
  }
  const double base = (mesh.pts[far] - mesh.pts[0]).norm();
  double offset = 0.0;
  for (int i = 0; i < n; ++i) {
    offset = std::max(offset, std::abs(Orient2d(mesh.pts[0], mesh.pts[far],
                                                mesh.pts[i])) / base);
  }
  if (offset < 1e-9) {
    throw Error(ErrorCode::kCollinear, "all points are collinear");
  }

  // Super-triangle spanning 100x the (unit) bounding box.
  mesh.pts.push_back({-2.0 * kSuperScale, -kSuperScale});
  mesh.pts.push_back({2.0 * kSuperScale, -kSuperScale});
  mesh.pts.push_back({0.0, 2.0 * kSuperScale});
  mesh.faces.push_back({n, n + 1, n + 2});

  for (int i = 0; i < n; ++i) Insert(mesh, i);

  std::erase_if(mesh.faces, [n](const Face& f) {
    return f[0] >= n || f[1] >= n || f[2] >= n;
  });
  mesh.pts.resize(n);

  CompleteHull(mesh, n);
  LawsonFlips(mesh, n);

  for (Face& f : mesh.faces) {
    std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
  }
  std::sort(mesh.faces.begin(), mesh.faces.end());
  return mesh.faces;
}

std::vector<int> BoundaryVertices(std::span<const Face> faces) {
  std::map<std::pair<int, int>, int> uses;
  for (const Face& f : faces) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[e];
      const int b = f[(e + 1) % 3];
      ++uses[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::vector<int> boundary;
  for (const auto& [edge, count] : uses) {
    if (count == 1) {
      boundary.push_back(edge.first);
      boundary.push_back(edge.second);
    }
  }
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  return boundary;
}

}  // namespace trisweep
