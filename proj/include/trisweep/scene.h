#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "trisweep/camera.h"
#include "trisweep/plane.h"

namespace trisweep {

struct StageBounds {
  Eigen::Vector3d min{-2.0, -2.0, 0.0};
  Eigen::Vector3d max{2.0, 2.0, 2.0};
};

// Checkered ground plane z = 0 limited to [x_min, x_max] x [y_min, y_max].
// With octaves > 1 every cell of size cell * 2^k (k < octaves) gets a hashed
// binary tone; the tones are summed with weight persistence^k and mixed
// between the two colors, giving non-repeating texture at every scale.
struct GroundPlane {
  double cell = 0.25;
  int octaves = 1;
  double persistence = 1.0;
  Eigen::Vector3d color_a{0.9, 0.9, 0.85};
  Eigen::Vector3d color_b{0.15, 0.2, 0.3};
  Eigen::Vector4d extent{-2.0, 2.0, -2.0, 2.0};
};

// Sphere with a two-tone latitude/longitude checker.
struct Sphere {
  Eigen::Vector3d center{0.0, 0.0, 1.0};
  double radius = 0.5;
  Eigen::Vector3d color_a{0.85, 0.3, 0.2};
  Eigen::Vector3d color_b{0.2, 0.6, 0.9};
  double cell_deg = 30.0;
};

struct SceneSpec {
  std::optional<GroundPlane> ground;
  std::vector<Sphere> spheres;
  StageBounds stage;

  // Throws kInvalidArgument for non-positive radii or cell sizes, or spheres
  // reaching outside the stage bounds.
  void Validate() const;
};

// Light travels along normalize(1, 1, -2); ambient term 0.2.
inline const Eigen::Vector3d kLightDirection =
    Eigen::Vector3d(1.0, 1.0, -2.0).normalized();
inline constexpr double kAmbient = 0.2;

struct RenderResult {
  Image rgb;
  DepthMap depth;  // camera-frame z, 0 on background
  Mask mask;
};

// One ray per pixel center, nearest analytic hit, Lambertian shading.
RenderResult Render(const SceneSpec& scene, const CameraPose& pose);

// Cameras on horizontal rings around the vertical axis through `look_at`,
// each looking at `look_at` without roll. Odd rings are rotated by half the
// angular step when `stagger` is set. Throws kInvalidArgument when
// n_per_ring < 3 or heights.size() != rings.
std::vector<CameraPose> MakeRig(int n_per_ring, int rings, double radius,
                                const std::vector<double>& heights,
                                const Eigen::Vector3d& look_at,
                                const CameraIntrinsics& intrinsics,
                                bool stagger = true);

// 16 cameras: two staggered rings of 8 at radius 3 m and heights 0.5 / 1.5 m,
// looking at (0, 0, 1), 256x256 with a 60 degree horizontal field of view.
std::vector<CameraPose> CanonicalRig();

// Scene document:
//   { "ground": { "cell": m, "octaves": n,
//                 "persistence": p, "color_a": [3], "color_b": [3],
//                 "extent": [x0, x1, y0, y1] } | null,
//     "spheres": [ { "center": [3], "radius": m, "color_a": [3],
//                    "color_b": [3], "cell_deg": deg } ],
//     "stage": { "min": [3], "max": [3] } }
// Missing optional fields take the defaults above. Throws kParse.
SceneSpec ParseScene(const nlohmann::json& doc);
nlohmann::json SceneToJson(const SceneSpec& scene);

}  // namespace trisweep
