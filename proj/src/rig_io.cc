#include "trisweep/rig_io.h"

#include <fstream>

#include "trisweep/error.h"

namespace trisweep {
namespace {

constexpr double kRotationTolerance = 1e-6;

std::vector<double> NumberArray(const nlohmann::json& node, const char* key,
                                size_t count) {
  if (!node.contains(key) || !node[key].is_array() ||
      node[key].size() != count) {
    throw Error(ErrorCode::kParse, std::string("field '") + key +
                                       "' must be an array of " +
                                       std::to_string(count) + " numbers");
  }
  std::vector<double> values;
  for (const auto& v : node[key]) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kParse,
                  std::string("field '") + key + "' holds a non-number");
    }
    values.push_back(v.get<double>());
  }
  return values;
}

int IntField(const nlohmann::json& node, const char* key) {
  if (!node.contains(key) || !node[key].is_number_integer()) {
    throw Error(ErrorCode::kParse,
                std::string("field '") + key + "' must be an integer");
  }
  return node[key].get<int>();
}

}  // namespace

CameraPose ParsePose(const nlohmann::json& camera) {
  if (!camera.is_object()) {
    throw Error(ErrorCode::kParse, "camera entry must be an object");
  }
  const auto k = NumberArray(camera, "K", 9);
  const auto r = NumberArray(camera, "R", 9);
  const auto t = NumberArray(camera, "t", 3);

  CameraPose pose;
  pose.intrinsics.fx = k[0];
  pose.intrinsics.cx = k[2];
  pose.intrinsics.fy = k[4];
  pose.intrinsics.cy = k[5];
  pose.intrinsics.width = IntField(camera, "width");
  pose.intrinsics.height = IntField(camera, "height");
  if (k[1] != 0.0 || k[3] != 0.0 || k[6] != 0.0 || k[7] != 0.0 ||
      k[8] != 1.0) {
    throw Error(ErrorCode::kParse, "K must be [fx 0 cx; 0 fy cy; 0 0 1]");
  }

  Eigen::Matrix3d rotation;
  for (int i = 0; i < 9; ++i) rotation(i / 3, i % 3) = r[i];
  pose.translation = Eigen::Vector3d(t[0], t[1], t[2]);

  pose.rotation = rotation;
  try {
    pose.Validate(kRotationTolerance);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  pose.rotation = Orthonormalize(rotation);
  return pose;
}

nlohmann::json PoseToJson(const CameraPose& pose) {
  nlohmann::json camera;
  const auto& k = pose.intrinsics;
  camera["K"] = {k.fx, 0.0, k.cx, 0.0, k.fy, k.cy, 0.0, 0.0, 1.0};
  auto r = nlohmann::json::array();
  for (int i = 0; i < 9; ++i) r.push_back(pose.rotation(i / 3, i % 3));
  camera["R"] = r;
  camera["t"] = {pose.translation.x(), pose.translation.y(),
                 pose.translation.z()};
  camera["width"] = k.width;
  camera["height"] = k.height;
  return camera;
}

std::vector<RigCamera> ParseRig(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("cameras") ||
      !doc["cameras"].is_array()) {
    throw Error(ErrorCode::kParse, "rig must contain a 'cameras' array");
  }
  std::vector<RigCamera> cameras;
  for (const auto& entry : doc["cameras"]) {
    RigCamera camera;
    if (!entry.contains("id") || !entry["id"].is_string()) {
      throw Error(ErrorCode::kParse, "camera 'id' must be a string");
    }
    camera.id = entry["id"].get<std::string>();
    try {
      camera.pose = ParsePose(entry);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse,
                  "camera '" + camera.id + "': " + e.what());
    }
    cameras.push_back(std::move(camera));
  }
  return cameras;
}

nlohmann::json RigToJson(const std::vector<RigCamera>& cameras) {
  nlohmann::json doc;
  doc["cameras"] = nlohmann::json::array();
  for (const auto& camera : cameras) {
    nlohmann::json entry = PoseToJson(camera.pose);
    entry["id"] = camera.id;
    doc["cameras"].push_back(entry);
  }
  return doc;
}

nlohmann::json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path,
                   const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::vector<RigCamera> LoadRig(const std::filesystem::path& path) {
  return ParseRig(ReadJsonFile(path));
}

}  // namespace trisweep
