#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asbuilt/assembly.hpp"
#include "asbuilt/json_io.hpp"
#include "asbuilt/mesh.hpp"

namespace asbuilt {

/// Scene directory layout: <dir>/scene.json, <dir>/assets/, <dir>/logs/.
inline constexpr const char* kManifestFile = "scene.json";

class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PartEntry {
  std::string part_id;
  std::string mesh_asset;
  Pose initial_pose;
  std::optional<double> threshold;
};

struct SlotEntry {
  std::string slot_id;
  std::string expected_part;
  Pose target_pose;
  std::optional<std::string> bim_asset;
  std::optional<MacroMetrics> bim_metrics;  // inline alternative to bim_asset
};

/// Declarative scene description, as authored.
struct SceneManifest {
  std::string scene_id;
  std::map<std::string, std::string> assets;  // asset id -> path relative to the scene dir
  std::vector<PartEntry> parts;
  std::vector<SlotEntry> slots;
  SnapConfig snap;
  std::int64_t par_time_ms = 60000;
  GradingWeights weights;
};

/// Throws SceneError for structural problems (missing keys, bad types,
/// dangling references).
SceneManifest parse_manifest(const Json& j);
Json manifest_to_json(const SceneManifest& m);

/// A manifest with every mesh loaded and every metric computed.
struct LoadedScene {
  std::filesystem::path root;
  SceneManifest manifest;
  Json manifest_json;  // as read from disk
  std::map<std::string, TriangleMesh> meshes;  // by asset id
  Scene scene;
};

/// Reads <dir>/scene.json, loads all assets, computes metrics once. Throws
/// SceneError naming the offending asset or field.
LoadedScene load_scene(const std::filesystem::path& dir);

}  // namespace asbuilt
