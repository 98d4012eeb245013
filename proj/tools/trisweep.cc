// trisweep command-line tool.
//
// Exit codes: 0 success, 1 usage or invalid argument, 2 parse failure,
// 3 degenerate rig, 4 target outside camera coverage, 5 I/O failure.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "trisweep/camera.h"
#include "trisweep/error.h"
#include "trisweep/image_io.h"
#include "trisweep/metrics.h"
#include "trisweep/pipeline.h"
#include "trisweep/rig_io.h"
#include "trisweep/rig_select.h"
#include "trisweep/scene.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trisweep;

namespace {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitDegenerateRig = 3,
  kExitOutsideCoverage = 4,
  kExitIo = 5,
};

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
      return kExitParse;
    case ErrorCode::kDegenerateRig:
    case ErrorCode::kDuplicatePoints:
    case ErrorCode::kCollinear:
      return kExitDegenerateRig;
    case ErrorCode::kOutsideCoverage:
      return kExitOutsideCoverage;
    case ErrorCode::kIo:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

struct CommonOptions {
  std::string out_dir;
  int threads = 0;
};

struct SelectionOptions {
  double delta_o = 1.0;
  double delta_p = 1.0;
  bool pca_axis = false;

  ProjectionConfig Projection() const { return {delta_o, delta_p}; }
};

struct RunOptions {
  std::string rig;
  std::string scene;
  std::string views;
  std::string target;
  std::string target_camera;
  std::string gt_image;
  std::string gt_depth;
  std::string gt_mask;
  double d_min = 0.5;
  double d_max = 8.5;
  int hypotheses = kCoarseHypotheses;
  int window = kWindowHypotheses;
  double beta = 10.0;
  double kappa_photo = 5.0;
  double kappa_ang = 2.0;
  bool per_level_weights = false;
  bool reference_sweep = false;
  bool all_levels = false;
  int dump_channel = -1;
  SelectionOptions selection;
};

// Flags win over environment variables, which win over built-in defaults.
void ApplyEnvironment(CommonOptions& common) {
  if (common.out_dir.empty()) {
    const char* env = std::getenv("TRISWEEP_OUT_DIR");
    common.out_dir = env && *env ? env : ".";
  }
  if (common.threads <= 0) {
    if (const char* env = std::getenv("TRISWEEP_THREADS"); env && *env) {
      char* end = nullptr;
      const long n = std::strtol(env, &end, 10);
      if (*end != '\0' || n <= 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "TRISWEEP_THREADS must be a positive integer");
      }
      common.threads = static_cast<int>(n);
    }
  }
  if (common.threads > 0) omp_set_num_threads(common.threads);
  std::error_code ec;
  fs::create_directories(common.out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create output directory " + common.out_dir);
  }
}

void AddCommon(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--out", common.out_dir,
                  "Output directory (env TRISWEEP_OUT_DIR, default .)");
  cmd->add_option("--threads", common.threads,
                  "Worker threads (env TRISWEEP_THREADS)")
      ->check(CLI::PositiveNumber);
}

void AddSelection(CLI::App* cmd, SelectionOptions& sel) {
  cmd->add_option("--delta-o", sel.delta_o,
                  "Projection origin offset below the cylinder, meters")
      ->capture_default_str();
  cmd->add_option("--delta-p", sel.delta_p,
                  "Projection plane offset above the cylinder, meters")
      ->capture_default_str();
  cmd->add_flag("--pca-axis", sel.pca_axis,
                "Fit the cylinder axis by PCA instead of world up");
}

void AddRun(CLI::App* cmd, RunOptions& run) {
  cmd->add_option("--rig", run.rig, "Rig JSON")->required();
  auto* scene = cmd->add_option("--scene", run.scene,
                                "Scene JSON; sources and ground truth are "
                                "rendered analytically");
  auto* views = cmd->add_option("--views", run.views,
                                "Directory with <id>.ppm and <id>.mask.pgm "
                                "per rig camera");
  scene->excludes(views);
  auto* target = cmd->add_option("--target", run.target,
                                 "Target pose JSON (camera object or rig "
                                 "document, first camera used)");
  auto* target_camera = cmd->add_option("--target-camera", run.target_camera,
                                        "Use this rig camera as the target");
  target->excludes(target_camera);
  cmd->add_option("--gt-image", run.gt_image, "Ground-truth target PPM");
  cmd->add_option("--gt-depth", run.gt_depth, "Ground-truth target depth PFM");
  cmd->add_option("--gt-mask", run.gt_mask, "Ground-truth target mask PGM");
  cmd->add_option("--d-min", run.d_min, "Nearest depth hypothesis, meters")
      ->capture_default_str();
  cmd->add_option("--d-max", run.d_max, "Farthest depth hypothesis, meters")
      ->capture_default_str();
  cmd->add_option("--hypotheses", run.hypotheses, "Coarse hypothesis count")
      ->capture_default_str();
  cmd->add_option("--window", run.window,
                  "Hypotheses per refinement window (odd, includes 0 so "
                  "refinement never worsens an exact prediction)")
      ->capture_default_str();
  cmd->add_option("--beta", run.beta, "Soft-argmax temperature")
      ->capture_default_str();
  cmd->add_option("--kappa-photo", run.kappa_photo,
                  "Confidence weight on photo-consistency")
      ->capture_default_str();
  cmd->add_option("--kappa-ang", run.kappa_ang,
                  "Confidence penalty on angular distance")
      ->capture_default_str();
  cmd->add_flag("--per-level-weights", run.per_level_weights,
                "Estimate alpha with per-level confidence weights");
  cmd->add_flag("--reference-sweep", run.reference_sweep,
                "Use the serial reference sweep");
  AddSelection(cmd, run.selection);
}

DepthConfig MakeDepthConfig(const RunOptions& run) {
  DepthConfig config;
  config.range = {run.d_min, run.d_max};
  config.coarse_count = run.hypotheses;
  config.window_count = run.window;
  config.beta = run.beta;
  config.confidence.kappa_photo = run.kappa_photo;
  config.confidence.kappa_ang = run.kappa_ang;
  config.per_level_weights = run.per_level_weights;
  config.reference_sweep = run.reference_sweep;
  config.Validate();
  return config;
}

std::vector<CameraPose> Poses(const std::vector<RigCamera>& rig) {
  std::vector<CameraPose> poses;
  poses.reserve(rig.size());
  for (const auto& cam : rig) poses.push_back(cam.pose);
  return poses;
}

json TriangulationToJson(const RigTriangulation& tri,
                         const std::vector<RigCamera>& rig) {
  json doc;
  doc["cylinder"] = {
      {"axis", {tri.fit.axis.x(), tri.fit.axis.y(), tri.fit.axis.z()}},
      {"base", {tri.fit.base.x(), tri.fit.base.y(), tri.fit.base.z()}},
      {"radius", tri.fit.radius},
      {"height", tri.fit.height}};
  doc["delta_o"] = tri.config.origin_offset;
  doc["delta_p"] = tri.config.plane_offset;
  doc["points"] = json::array();
  for (size_t i = 0; i < rig.size(); ++i) {
    doc["points"].push_back({{"id", rig[i].id},
                             {"uv", {tri.points2d[i].x(), tri.points2d[i].y()}}});
  }
  const auto quality = TriangulationQuality(tri);
  doc["faces"] = json::array();
  for (size_t f = 0; f < tri.faces.size(); ++f) {
    const Face& face = tri.faces[f];
    doc["faces"].push_back({{"vertices", {face[0], face[1], face[2]}},
                            {"ids",
                             {rig[face[0]].id, rig[face[1]].id, rig[face[2]].id}},
                            {"min_angle_deg", quality[f].min_angle_deg},
                            {"aspect_ratio", quality[f].aspect_ratio},
                            {"area", quality[f].area}});
  }
  const int n = static_cast<int>(tri.points2d.size());
  const int h = static_cast<int>(BoundaryVertices(tri.faces).size());
  doc["euler"] = {{"points", n},
                  {"hull_points", h},
                  {"faces", tri.faces.size()},
                  {"expected_faces", 2 * n - 2 - h}};
  return doc;
}

struct QualitySummary {
  double mean_min_angle = 0.0;
  double min_min_angle = 0.0;
  double max_aspect = 0.0;
  int slivers = 0;
};

QualitySummary Summarize(const std::vector<TriangleQuality>& quality) {
  QualitySummary s;
  if (quality.empty()) return s;
  s.min_min_angle = quality.front().min_angle_deg;
  for (const auto& q : quality) {
    s.mean_min_angle += q.min_angle_deg;
    s.max_aspect = std::max(s.max_aspect, q.aspect_ratio);
    s.min_min_angle = std::min(s.min_min_angle, q.min_angle_deg);
    s.slivers += q.min_angle_deg < kSliverAngleDeg;
  }
  s.mean_min_angle /= quality.size();
  return s;
}

// Shortest round-trip formatting, identical to the JSON writer.
std::string Num(double v) { return json(v).dump(); }

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

int CmdTriangulate(const std::string& rig_path, const SelectionOptions& sel,
                   const CommonOptions& common) {
  const auto rig = LoadRig(rig_path);
  const auto poses = Poses(rig);
  const auto tri = TriangulateRig(std::span<const CameraPose>(poses),
                                  sel.Projection(), Eigen::Vector3d::UnitZ(),
                                  sel.pca_axis);
  const fs::path out = common.out_dir;
  WriteJsonFile(out / "triangulation.json", TriangulationToJson(tri, rig));

  std::ostringstream csv;
  csv << "face,id_a,id_b,id_c,min_angle_deg,aspect_ratio,area\n";
  const auto quality = TriangulationQuality(tri);
  for (size_t f = 0; f < tri.faces.size(); ++f) {
    const Face& face = tri.faces[f];
    csv << f << ',' << rig[face[0]].id << ',' << rig[face[1]].id << ','
        << rig[face[2]].id << ',' << Num(quality[f].min_angle_deg) << ','
        << Num(quality[f].aspect_ratio) << ',' << Num(quality[f].area) << '\n';
  }
  WriteText(out / "triangulation_quality.csv", csv.str());
  std::cout << "triangulate: " << rig.size() << " cameras, " << tri.faces.size()
            << " faces -> " << (out / "triangulation.json").string() << '\n';
  return kExitOk;
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad number in list: " + item);
    }
  }
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "empty list");
  return values;
}

int CmdAblate(const std::string& rig_path, const std::string& grid,
              const std::string& grid_o, const std::string& grid_p,
              bool pca_axis, const CommonOptions& common) {
  const auto rig = LoadRig(rig_path);
  const auto poses = Poses(rig);
  const auto values_o = ParseList(grid_o.empty() ? grid : grid_o);
  const auto values_p = ParseList(grid_p.empty() ? grid : grid_p);
  std::ostringstream csv;
  csv << "delta_o,delta_p,mean_min_angle,max_aspect,n_faces,min_min_angle,"
         "slivers\n";
  for (double o : values_o) {
    for (double p : values_p) {
      const auto tri = TriangulateRig(std::span<const CameraPose>(poses), {o, p},
                                      Eigen::Vector3d::UnitZ(), pca_axis);
      const auto s = Summarize(TriangulationQuality(tri));
      csv << Num(o) << ',' << Num(p) << ',' << Num(s.mean_min_angle) << ','
          << Num(s.max_aspect) << ',' << tri.faces.size() << ','
          << Num(s.min_min_angle) << ',' << s.slivers << '\n';
    }
  }
  const fs::path path = fs::path(common.out_dir) / "ablation.csv";
  WriteText(path, csv.str());
  std::cout << "ablate-triangulation: " << values_o.size() * values_p.size()
            << " rows -> " << path.string() << '\n';
  return kExitOk;
}

int CmdSampleTarget(const std::string& rig_path, uint64_t seed, int count,
                    double jitter, const SelectionOptions& sel,
                    const CommonOptions& common) {
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, "count must be >= 1");
  if (!(jitter >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "jitter must be >= 0");
  }
  const auto rig = LoadRig(rig_path);
  const auto poses = Poses(rig);
  const auto tri = TriangulateRig(std::span<const CameraPose>(poses),
                                  sel.Projection(), Eigen::Vector3d::UnitZ(),
                                  sel.pca_axis);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick_face(0, tri.faces.size() - 1);
  std::exponential_distribution<double> gamma1(1.0);
  std::uniform_real_distribution<double> pick_jitter(-jitter, jitter);

  json doc;
  doc["seed"] = seed;
  doc["cameras"] = json::array();
  for (int s = 0; s < count; ++s) {
    const Face& face = tri.faces[pick_face(rng)];
    // Dirichlet(1, 1, 1) from normalized unit exponentials.
    Eigen::Vector3d w(gamma1(rng), gamma1(rng), gamma1(rng));
    w /= w.sum();
    const double j = pick_jitter(rng);
    const CameraPose pose = InterpolatePose(
        {poses[face[0]], poses[face[1]], poses[face[2]]}, w, j);
    json entry = PoseToJson(pose);
    char id[32];
    std::snprintf(id, sizeof(id), "target_%04d", s);
    entry["id"] = id;
    entry["source_ids"] = {rig[face[0]].id, rig[face[1]].id, rig[face[2]].id};
    entry["weights"] = {w[0], w[1], w[2]};
    entry["jitter"] = j;
    doc["cameras"].push_back(entry);
  }
  const fs::path path = fs::path(common.out_dir) / "target.json";
  WriteJsonFile(path, doc);
  std::cout << "sample-target: " << count << " pose(s) -> " << path.string()
            << '\n';
  return kExitOk;
}

CameraPose LoadTarget(const RunOptions& run, const std::vector<RigCamera>& rig) {
  if (!run.target_camera.empty()) {
    for (const auto& cam : rig) {
      if (cam.id == run.target_camera) return cam.pose;
    }
    throw Error(ErrorCode::kInvalidArgument,
                "no rig camera with id " + run.target_camera);
  }
  if (run.target.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "one of --target or --target-camera is required");
  }
  const json doc = ReadJsonFile(run.target);
  if (doc.is_object() && doc.contains("cameras")) {
    if (!doc["cameras"].is_array() || doc["cameras"].empty()) {
      throw Error(ErrorCode::kParse, "target document has no cameras");
    }
    return ParsePose(doc["cameras"][0]);
  }
  return ParsePose(doc);
}

struct PreparedRun {
  std::vector<RigCamera> rig;
  CameraPose target;
  TripletSelection selection;
  std::array<SourceView, kSourceViews> sources;
  std::optional<GroundTruth> truth;
};

PreparedRun Prepare(const RunOptions& run) {
  if (run.scene.empty() == run.views.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "exactly one of --scene or --views is required");
  }
  PreparedRun prep;
  prep.rig = LoadRig(run.rig);
  prep.target = LoadTarget(run, prep.rig);
  const auto poses = Poses(prep.rig);
  const auto tri = TriangulateRig(std::span<const CameraPose>(poses),
                                  run.selection.Projection(),
                                  Eigen::Vector3d::UnitZ(),
                                  run.selection.pca_axis);
  prep.selection = SelectTriplet(tri, prep.target);

  std::optional<SceneSpec> scene;
  if (!run.scene.empty()) scene = ParseScene(ReadJsonFile(run.scene));
  for (int v = 0; v < kSourceViews; ++v) {
    const RigCamera& cam = prep.rig[prep.selection.face[v]];
    SourceView& src = prep.sources[v];
    src.pose = cam.pose;
    if (scene) {
      RenderResult r = Render(*scene, cam.pose);
      src.rgb = std::move(r.rgb);
      src.mask = std::move(r.mask);
    } else {
      const fs::path dir = run.views;
      src.rgb = ReadPpm(dir / (cam.id + ".ppm"));
      src.mask = ReadMaskPgm(dir / (cam.id + ".mask.pgm"));
    }
  }

  if (scene) {
    RenderResult r = Render(*scene, prep.target);
    prep.truth = GroundTruth{std::move(r.rgb), std::move(r.depth),
                             std::move(r.mask)};
  } else if (!run.gt_image.empty()) {
    GroundTruth truth;
    truth.rgb = ReadPpm(run.gt_image);
    const int w = truth.rgb.width();
    const int h = truth.rgb.height();
    truth.depth = run.gt_depth.empty()
                      ? DepthMap{Image(w, h, 1), 0}
                      : DepthMap{ReadPfm(run.gt_depth), 0};
    truth.mask = run.gt_mask.empty() ? Mask(w, h, 1, 1) : ReadMaskPgm(run.gt_mask);
    prep.truth = std::move(truth);
  }
  return prep;
}

json SelectionToJson(const PreparedRun& prep) {
  const auto& s = prep.selection;
  return {{"face_index", s.face_index},
          {"ids",
           {prep.rig[s.face[0]].id, prep.rig[s.face[1]].id,
            prep.rig[s.face[2]].id}},
          {"bary", {s.bary[0], s.bary[1], s.bary[2]}},
          {"query_uv", {s.query_point.x(), s.query_point.y()}}};
}

json LevelsToJson(const DepthPyramid& depth) {
  json levels = json::array();
  for (int l = 0; l < kPyramidLevels; ++l) {
    const auto& est = depth.levels[l];
    levels.push_back({{"level", l},
                      {"width", est.depth.width()},
                      {"height", est.depth.height()},
                      {"window_radius", est.window_radius},
                      {"residual_max_abs", est.stats.max_abs},
                      {"residual_mean_abs", est.stats.mean_abs},
                      {"refined_pixels", est.stats.valid}});
  }
  return levels;
}

void PrintTimings(const char* name, const StageTimings& t) {
  std::printf("%s: pyramids %.3fs, depth %.3fs, fuse %.3fs, synthesize %.3fs, "
              "total %.3fs\n",
              name, t.pyramids_s, t.depth_s, t.fuse_s, t.synthesize_s,
              t.total_s);
}

int CmdDepth(const RunOptions& run, const CommonOptions& common) {
  const DepthConfig config = MakeDepthConfig(run);
  const PreparedRun prep = Prepare(run);
  const PipelineResult result = RunPipeline(prep.sources, prep.target, config);
  const fs::path out = common.out_dir;
  WritePfm(out / "depth.pfm", result.depth.levels[0].depth.depth);
  if (run.all_levels) {
    for (int l = 0; l < kPyramidLevels; ++l) {
      WritePfm(out / ("depth_l" + std::to_string(l) + ".pfm"),
               result.depth.levels[l].depth.depth);
    }
  }
  if (run.dump_channel >= 0) {
    for (int v = 0; v < kSourceViews; ++v) {
      const FeaturePlane features = ComputeFeatures(prep.sources[v].rgb);
      Image gray(features.width(), features.height(), 1);
      for (int y = 0; y < gray.height(); ++y) {
        for (int x = 0; x < gray.width(); ++x) {
          gray.at(x, y) = 0.5 * (features.at(x, y, run.dump_channel) + 1.0);
        }
      }
      const std::string& id = prep.rig[prep.selection.face[v]].id;
      WritePgm(out / ("feature_" + id + "_c" +
                      std::to_string(run.dump_channel) + ".pgm"),
               gray);
    }
  }
  json report;
  report["triplet"] = SelectionToJson(prep);
  report["levels"] = LevelsToJson(result.depth);
  if (prep.truth && !prep.truth->depth.depth.empty()) {
    report["eval"] = ReportToJson(Evaluate(result, *prep.truth))["levels"];
  } else {
    report["eval"] = nullptr;
  }
  WriteJsonFile(out / "depth_report.json", report);
  PrintTimings("depth", result.timings);
  return kExitOk;
}

int CmdRender(const RunOptions& run, const CommonOptions& common) {
  const DepthConfig config = MakeDepthConfig(run);
  const PreparedRun prep = Prepare(run);
  const PipelineResult result = RunPipeline(prep.sources, prep.target, config);
  const fs::path out = common.out_dir;
  WritePpm(out / "image.ppm", result.synthesis.rgb);
  WritePgm(out / "alpha.pgm", result.synthesis.alpha.alpha);
  WritePfm(out / "depth.pfm", result.depth.levels[0].depth.depth);
  json report;
  report["triplet"] = SelectionToJson(prep);
  report["target"] = PoseToJson(prep.target);
  report["levels"] = LevelsToJson(result.depth);
  if (prep.truth) {
    const EvalReport eval = Evaluate(result, *prep.truth);
    report["eval"] = ReportToJson(eval);
    std::printf("render: psnr %s dB, ssim %.4f\n",
                std::isinf(*eval.psnr) ? "inf" : Num(*eval.psnr).c_str(),
                *eval.ssim);
  } else {
    report["eval"] = nullptr;
  }
  WriteJsonFile(out / "report.json", report);
  PrintTimings("render", result.timings);
  return kExitOk;
}

int CmdEval(const std::string& image, const std::string& reference,
            const std::string& depth, const std::string& gt_depth,
            const std::string& alpha, const std::string& gt_alpha,
            const CommonOptions& common) {
  EvalReport report;
  const Image a = ReadPpm(image);
  const Image b = ReadPpm(reference);
  report.psnr = Psnr(a, b);
  report.ssim = Ssim(a, b);
  if (!depth.empty() || !gt_depth.empty()) {
    if (depth.empty() || gt_depth.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--depth and --gt-depth go together");
    }
    const DepthMap pred{ReadPfm(depth), 0};
    const DepthMap gt{ReadPfm(gt_depth), 0};
    const Mask joint = JointValidMask(pred, gt);
    size_t joint_count = 0;
    size_t gt_count = 0;
    for (int y = 0; y < gt.height(); ++y) {
      for (int x = 0; x < gt.width(); ++x) {
        joint_count += joint.at(x, y);
        gt_count += gt.valid(x, y);
      }
    }
    report.levels[0].depth_mae = MaskedDepthMae(pred, gt, joint);
    report.levels[0].depth_coverage =
        gt_count ? static_cast<double>(joint_count) / gt_count : 0.0;
  }
  if (!alpha.empty() || !gt_alpha.empty()) {
    if (alpha.empty() || gt_alpha.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--alpha and --gt-alpha go together");
    }
    report.levels[0].alpha_mse =
        AlphaMse(AlphaMap{ReadPgm(alpha)}, AlphaMap{ReadPgm(gt_alpha)});
  }
  const fs::path path = fs::path(common.out_dir) / "eval.json";
  WriteJsonFile(path, ReportToJson(report));
  std::cout << "eval: -> " << path.string() << '\n';
  return kExitOk;
}

struct RigOptions {
  int per_ring = 8;
  int rings = 2;
  double radius = 3.0;
  std::string heights = "0.5,1.5";
  std::string look_at = "0,0,1";
  int width = 256;
  int height = 256;
  double fov_deg = 60.0;
  bool no_stagger = false;
};

int CmdMakeRig(const RigOptions& opt, const CommonOptions& common) {
  const auto heights = ParseList(opt.heights);
  const auto look = ParseList(opt.look_at);
  if (look.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "--look-at needs 3 numbers");
  }
  const auto poses =
      MakeRig(opt.per_ring, opt.rings, opt.radius, heights,
              {look[0], look[1], look[2]},
              IntrinsicsFromFov(opt.width, opt.height,
                                opt.fov_deg * std::numbers::pi / 180.0),
              !opt.no_stagger);
  std::vector<RigCamera> rig;
  for (size_t i = 0; i < poses.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "cam%02zu", i);
    rig.push_back({id, poses[i]});
  }
  const fs::path path = fs::path(common.out_dir) / "rig.json";
  WriteJsonFile(path, RigToJson(rig));
  std::cout << "make-rig: " << rig.size() << " cameras -> " << path.string()
            << '\n';
  return kExitOk;
}

int CmdRenderViews(const std::string& rig_path, const std::string& scene_path,
                   const CommonOptions& common) {
  const auto rig = LoadRig(rig_path);
  const SceneSpec scene = ParseScene(ReadJsonFile(scene_path));
  const fs::path out = common.out_dir;
  for (const auto& cam : rig) {
    const RenderResult r = Render(scene, cam.pose);
    WritePpm(out / (cam.id + ".ppm"), r.rgb);
    WriteMaskPgm(out / (cam.id + ".mask.pgm"), r.mask);
    WritePfm(out / (cam.id + ".depth.pfm"), r.depth.depth);
  }
  std::cout << "render-views: " << rig.size() << " views -> " << out.string()
            << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-view synthesis: triplet selection, plane-sweep depth, "
               "depth-guided fusion.\n"
               "Exit codes: 0 ok, 1 usage, 2 parse, 3 degenerate rig, "
               "4 outside coverage, 5 I/O."};
  app.require_subcommand(1);

  CommonOptions common;
  std::string rig_path;
  SelectionOptions sel;

  auto* tri = app.add_subcommand("triangulate",
                                 "Delaunay triangulation of the rig; writes "
                                 "triangulation.json and a quality CSV");
  tri->add_option("--rig", rig_path, "Rig JSON")->required();
  AddSelection(tri, sel);
  AddCommon(tri, common);

  std::string grid = "1,2,5,10";
  std::string grid_o;
  std::string grid_p;
  auto* ablate = app.add_subcommand(
      "ablate-triangulation",
      "Triangle quality over a grid of origin/plane offsets; writes "
      "ablation.csv");
  ablate->add_option("--rig", rig_path, "Rig JSON")->required();
  ablate->add_option("--grid", grid, "Offsets for both axes, comma separated")
      ->capture_default_str();
  ablate->add_option("--grid-o", grid_o, "Origin offsets (overrides --grid)");
  ablate->add_option("--grid-p", grid_p, "Plane offsets (overrides --grid)");
  ablate->add_flag("--pca-axis", sel.pca_axis, "Fit the cylinder axis by PCA");
  AddCommon(ablate, common);

  uint64_t seed = 0;
  int count = 1;
  double jitter = 0.2;
  auto* sample = app.add_subcommand(
      "sample-target",
      "Random target pose: random face, Dirichlet(1,1,1) weights, forward "
      "jitter; writes target.json");
  sample->add_option("--rig", rig_path, "Rig JSON")->required();
  sample->add_option("--seed", seed, "RNG seed")->capture_default_str();
  sample->add_option("--count", count, "Number of poses")->capture_default_str();
  sample->add_option("--jitter", jitter, "Forward jitter bound, meters")
      ->capture_default_str();
  AddSelection(sample, sel);
  AddCommon(sample, common);

  RunOptions run;
  auto* depth = app.add_subcommand(
      "depth", "Coarse-to-fine plane-sweep depth; writes depth.pfm and "
               "depth_report.json");
  AddRun(depth, run);
  depth->add_flag("--all-levels", run.all_levels,
                  "Also write depth_l<level>.pfm for every level");
  depth->add_option("--dump-channel", run.dump_channel,
                    "Write level-0 feature channel 0..7 of each source as "
                    "feature_<id>_c<channel>.pgm")
      ->check(CLI::Range(0, kFeatureChannels - 1));
  AddCommon(depth, common);

  auto* render = app.add_subcommand(
      "render", "Synthesize the target view; writes image.ppm, alpha.pgm, "
                "depth.pfm and report.json");
  AddRun(render, run);
  AddCommon(render, common);

  std::string image, reference, pred_depth, gt_depth, alpha, gt_alpha;
  auto* eval = app.add_subcommand("eval", "Image, depth and alpha metrics; "
                                          "writes eval.json");
  eval->add_option("--image", image, "Synthesized PPM")->required();
  eval->add_option("--reference", reference, "Reference PPM")->required();
  eval->add_option("--depth", pred_depth, "Predicted depth PFM");
  eval->add_option("--gt-depth", gt_depth, "Ground-truth depth PFM");
  eval->add_option("--alpha", alpha, "Predicted alpha PGM");
  eval->add_option("--gt-alpha", gt_alpha, "Ground-truth alpha PGM");
  AddCommon(eval, common);

  RigOptions rig_opt;
  auto* make_rig = app.add_subcommand(
      "make-rig", "Ring rig looking at a point; defaults give the canonical "
                  "16-camera rig; writes rig.json");
  make_rig->add_option("--per-ring", rig_opt.per_ring, "Cameras per ring")->capture_default_str();
  make_rig->add_option("--rings", rig_opt.rings, "Number of rings")->capture_default_str();
  make_rig->add_option("--radius", rig_opt.radius, "Ring radius, meters")->capture_default_str();
  make_rig->add_option("--heights", rig_opt.heights, "Ring heights, comma separated")->capture_default_str();
  make_rig->add_option("--look-at", rig_opt.look_at, "Point every camera looks at, x,y,z")->capture_default_str();
  make_rig->add_option("--width", rig_opt.width, "Image width, pixels")->capture_default_str();
  make_rig->add_option("--height", rig_opt.height, "Image height, pixels")->capture_default_str();
  make_rig->add_option("--fov", rig_opt.fov_deg, "Horizontal FOV, degrees")
      ->capture_default_str();
  make_rig->add_flag("--no-stagger", rig_opt.no_stagger,
                     "Align odd rings with even rings");
  AddCommon(make_rig, common);

  std::string scene_path;
  auto* render_views = app.add_subcommand(
      "render-views", "Render a scene from every rig camera: <id>.ppm, "
                      "<id>.mask.pgm, <id>.depth.pfm");
  render_views->add_option("--rig", rig_path, "Rig JSON")->required();
  render_views->add_option("--scene", scene_path, "Scene JSON")->required();
  AddCommon(render_views, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    ApplyEnvironment(common);
    if (*tri) return CmdTriangulate(rig_path, sel, common);
    if (*ablate) {
      return CmdAblate(rig_path, grid, grid_o, grid_p, sel.pca_axis, common);
    }
    if (*sample) return CmdSampleTarget(rig_path, seed, count, jitter, sel, common);
    if (*depth) return CmdDepth(run, common);
    if (*render) return CmdRender(run, common);
    if (*eval) {
      return CmdEval(image, reference, pred_depth, gt_depth, alpha, gt_alpha,
                     common);
    }
    if (*make_rig) return CmdMakeRig(rig_opt, common);
    if (*render_views) return CmdRenderViews(rig_path, scene_path, common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
