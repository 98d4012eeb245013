#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "trisweep/camera.h"

namespace trisweep {

struct RigCamera {
  std::string id;
  CameraPose pose;
};

// Rig document:
//   { "cameras": [ { "id": str, "K": [9], "R": [9], "t": [3],
//                    "width": int, "height": int } ] }
// K and R are row-major; R maps world to camera. Rotations deviating from
// orthonormal by more than 1e-6 are rejected with kParse; accepted ones are
// projected onto SO(3).
std::vector<RigCamera> ParseRig(const nlohmann::json& doc);
nlohmann::json RigToJson(const std::vector<RigCamera>& cameras);

// Single camera in the same per-camera layout as the rig document.
CameraPose ParsePose(const nlohmann::json& camera);
nlohmann::json PoseToJson(const CameraPose& pose);

// Throws kIo if the file cannot be read, kParse on malformed content.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& doc);

std::vector<RigCamera> LoadRig(const std::filesystem::path& path);

}  // namespace trisweep
