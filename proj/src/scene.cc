#include "trisweep/scene.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "trisweep/error.h"

namespace trisweep {
namespace {

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d albedo = Eigen::Vector3d::Zero();
};

bool Checker(double a, double b) {
  return (static_cast<long long>(std::floor(a)) +
          static_cast<long long>(std::floor(b))) % 2 == 0;
}

uint64_t Mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic sign for an integer cell.
double CellSign(int64_t i, int64_t j, int octave) {
  const uint64_t h = Mix(Mix(Mix(static_cast<uint64_t>(i)) ^
                             static_cast<uint64_t>(j)) ^
                         static_cast<uint64_t>(octave));
  return (h >> 63) ? 1.0 : -1.0;
}

double GroundTone(const GroundPlane& g, double x, double y) {
  if (g.octaves <= 1) return Checker(x / g.cell, y / g.cell) ? 0.0 : 1.0;
  double sum = 0.0;
  double norm = 0.0;
  double size = g.cell;
  double weight = 1.0;
  for (int k = 0; k < g.octaves; ++k, size *= 2.0, weight *= g.persistence) {
    sum += weight * CellSign(static_cast<int64_t>(std::floor(x / size)),
                             static_cast<int64_t>(std::floor(y / size)), k);
    norm += weight;
  }
  return 0.5 + 0.5 * sum / norm;
}

void IntersectGround(const GroundPlane& g, const Eigen::Vector3d& origin,
                     const Eigen::Vector3d& dir, Hit* hit) {
  if (dir.z() == 0.0) return;
  const double t = -origin.z() / dir.z();
  if (!(t > 0.0) || !(t < hit->t)) return;
  const Eigen::Vector3d p = origin + t * dir;
  if (p.x() < g.extent[0] || p.x() > g.extent[1] || p.y() < g.extent[2] ||
      p.y() > g.extent[3]) {
    return;
  }
  hit->t = t;
  hit->normal = Eigen::Vector3d::UnitZ();
  const double tone = GroundTone(g, p.x(), p.y());
  hit->albedo = (1.0 - tone) * g.color_a + tone * g.color_b;
}

void IntersectSphere(const Sphere& s, const Eigen::Vector3d& origin,
                     const Eigen::Vector3d& dir, Hit* hit) {
  const Eigen::Vector3d oc = origin - s.center;
  const double b = oc.dot(dir);
  const double c = oc.squaredNorm() - s.radius * s.radius;
  const double disc = b * b - c;
  if (disc < 0.0) return;
  const double root = std::sqrt(disc);
  double t = -b - root;
  if (!(t > 0.0)) t = -b + root;
  if (!(t > 0.0) || !(t < hit->t)) return;
  const Eigen::Vector3d n = (origin + t * dir - s.center) / s.radius;
  const double lon = std::atan2(n.y(), n.x()) * 180.0 / std::numbers::pi;
  const double lat = std::asin(std::clamp(n.z(), -1.0, 1.0)) * 180.0 /
                     std::numbers::pi;
  hit->t = t;
  hit->normal = n;
  hit->albedo = Checker(lon / s.cell_deg, lat / s.cell_deg) ? s.color_a
                                                            : s.color_b;
}

Eigen::Vector3d Vec3(const nlohmann::json& node, const char* key,
                     const Eigen::Vector3d& fallback) {
  if (!node.contains(key)) return fallback;
  const auto& v = node[key];
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
      !v[1].is_number() || !v[2].is_number()) {
    throw Error(ErrorCode::kParse,
                std::string("'") + key + "' must be 3 numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

double Number(const nlohmann::json& node, const char* key, double fallback) {
  if (!node.contains(key)) return fallback;
  if (!node[key].is_number()) {
    throw Error(ErrorCode::kParse, std::string("'") + key + "' must be a number");
  }
  return node[key].get<double>();
}

nlohmann::json ToJson(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

}  // namespace

void SceneSpec::Validate() const {
  if (ground && (!(ground->cell > 0.0) || ground->octaves < 1 ||
                 ground->octaves > 16 || !(ground->persistence > 0.0))) {
    throw Error(ErrorCode::kInvalidArgument,
                "ground cell and persistence must be positive, octaves 1..16");
  }
  for (const auto& s : spheres) {
    if (!(s.radius > 0.0) || !(s.cell_deg > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sphere radius and cell must be positive");
    }
    const Eigen::Vector3d r = Eigen::Vector3d::Constant(s.radius);
    if (((s.center - r).array() < stage.min.array()).any() ||
        ((s.center + r).array() > stage.max.array()).any()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sphere leaves the stage bounds");
    }
  }
}

RenderResult Render(const SceneSpec& scene, const CameraPose& pose) {
  const auto& k = pose.intrinsics;
  RenderResult out{Image(k.width, k.height, 3),
                   DepthMap{Image(k.width, k.height, 1), 0},
                   Mask(k.width, k.height, 1)};
  const Eigen::Vector3d origin = CameraCenter(pose);
  const Eigen::Matrix3d to_world = pose.rotation.transpose();
  const Eigen::Vector3d optical = OpticalAxis(pose);
  const Eigen::Vector3d to_light = -kLightDirection;

#pragma omp parallel for schedule(static)
  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      const Eigen::Vector3d cam((x + 0.5 - k.cx) / k.fx, (y + 0.5 - k.cy) / k.fy,
                                1.0);
      const Eigen::Vector3d dir = (to_world * cam).normalized();
      Hit hit;
      if (scene.ground) IntersectGround(*scene.ground, origin, dir, &hit);
      for (const auto& s : scene.spheres) IntersectSphere(s, origin, dir, &hit);
      if (!std::isfinite(hit.t)) continue;

      Eigen::Vector3d n = hit.normal;
      if (n.dot(dir) > 0.0) n = -n;
      const double shade =
          kAmbient + (1.0 - kAmbient) * std::max(0.0, n.dot(to_light));
      for (int c = 0; c < 3; ++c) {
        out.rgb.at(x, y, c) = std::clamp(hit.albedo[c] * shade, 0.0, 1.0);
      }
      out.depth.depth.at(x, y) = hit.t * dir.dot(optical);
      out.mask.at(x, y) = 1;
    }
  }
  return out;
}

std::vector<CameraPose> MakeRig(int n_per_ring, int rings, double radius,
                                const std::vector<double>& heights,
                                const Eigen::Vector3d& look_at,
                                const CameraIntrinsics& intrinsics,
                                bool stagger) {
  if (n_per_ring < 3) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 3 cameras per ring");
  }
  if (rings < 1 || static_cast<int>(heights.size()) != rings) {
    throw Error(ErrorCode::kInvalidArgument, "one height per ring required");
  }
  std::vector<CameraPose> rig;
  const double step = 2.0 * std::numbers::pi / n_per_ring;
  for (int ring = 0; ring < rings; ++ring) {
    const double phase = (stagger && ring % 2 == 1) ? 0.5 * step : 0.0;
    for (int i = 0; i < n_per_ring; ++i) {
      const double angle = phase + i * step;
      const Eigen::Vector3d center(look_at.x() + radius * std::cos(angle),
                                   look_at.y() + radius * std::sin(angle),
                                   heights[ring]);
      rig.push_back(LookAt(center, look_at, Eigen::Vector3d::UnitZ(), intrinsics));
    }
  }
  return rig;
}

std::vector<CameraPose> CanonicalRig() {
  return MakeRig(8, 2, 3.0, {0.5, 1.5}, Eigen::Vector3d(0.0, 0.0, 1.0),
                 IntrinsicsFromFov(256, 256, std::numbers::pi / 3.0));
}

SceneSpec ParseScene(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "scene must be an object");
  SceneSpec scene;
  if (doc.contains("ground") && !doc["ground"].is_null()) {
    const auto& g = doc["ground"];
    GroundPlane ground;
    ground.cell = Number(g, "cell", ground.cell);
    const double octaves = Number(g, "octaves", ground.octaves);
    if (octaves != std::floor(octaves)) {
      throw Error(ErrorCode::kParse, "'octaves' must be an integer");
    }
    ground.octaves = static_cast<int>(octaves);
    ground.persistence = Number(g, "persistence", ground.persistence);
    ground.color_a = Vec3(g, "color_a", ground.color_a);
    ground.color_b = Vec3(g, "color_b", ground.color_b);
    if (g.contains("extent")) {
      const auto& e = g["extent"];
      if (!e.is_array() || e.size() != 4) {
        throw Error(ErrorCode::kParse, "'extent' must be 4 numbers");
      }
      for (int i = 0; i < 4; ++i) {
        if (!e[i].is_number()) {
          throw Error(ErrorCode::kParse, "'extent' must be 4 numbers");
        }
        ground.extent[i] = e[i].get<double>();
      }
    }
    scene.ground = ground;
  }
  if (doc.contains("spheres")) {
    if (!doc["spheres"].is_array()) {
      throw Error(ErrorCode::kParse, "'spheres' must be an array");
    }
    for (const auto& s : doc["spheres"]) {
      Sphere sphere;
      sphere.center = Vec3(s, "center", sphere.center);
      sphere.radius = Number(s, "radius", sphere.radius);
      sphere.color_a = Vec3(s, "color_a", sphere.color_a);
      sphere.color_b = Vec3(s, "color_b", sphere.color_b);
      sphere.cell_deg = Number(s, "cell_deg", sphere.cell_deg);
      scene.spheres.push_back(sphere);
    }
  }
  if (doc.contains("stage")) {
    scene.stage.min = Vec3(doc["stage"], "min", scene.stage.min);
    scene.stage.max = Vec3(doc["stage"], "max", scene.stage.max);
  }
  try {
    scene.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  return scene;
}

nlohmann::json SceneToJson(const SceneSpec& scene) {
  nlohmann::json doc;
  if (scene.ground) {
    const auto& g = *scene.ground;
    doc["ground"] = {{"cell", g.cell},
                     {"octaves", g.octaves},
                     {"persistence", g.persistence},
                     {"color_a", ToJson(g.color_a)},
                     {"color_b", ToJson(g.color_b)},
                     {"extent", {g.extent[0], g.extent[1], g.extent[2], g.extent[3]}}};
  } else {
    doc["ground"] = nullptr;
  }
  doc["spheres"] = nlohmann::json::array();
  for (const auto& s : scene.spheres) {
    doc["spheres"].push_back({{"center", ToJson(s.center)},
                              {"radius", s.radius},
                              {"color_a", ToJson(s.color_a)},
                              {"color_b", ToJson(s.color_b)},
                              {"cell_deg", s.cell_deg}});
  }
  doc["stage"] = {{"min", ToJson(scene.stage.min)},
                  {"max", ToJson(scene.stage.max)}};
  return doc;
}

}  // namespace trisweep
