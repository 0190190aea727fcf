#include "asbuilt/scene.hpp"

#include <fstream>
#include <set>

#include "asbuilt/mesh_io.hpp"

namespace asbuilt {

namespace {

[[noreturn]] void bad(const std::string& what) { throw SceneError("scene manifest: " + what); }

std::string string_at(const Json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j.at(key).is_string()) bad(ctx + " needs string '" + key + "'");
  return j.at(key).get<std::string>();
}

Pose pose_at(const Json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) return Pose{};
  try {
    return pose_from_json(j.at(key));
  } catch (const FormatError& e) {
    bad(ctx + " '" + key + "': " + e.what());
  }
}

}  // namespace

SceneManifest parse_manifest(const Json& j) {
  if (!j.is_object()) bad("top level must be an object");
  SceneManifest m;
  m.scene_id = string_at(j, "scene_id", "scene");
  if (j.contains("par_time_ms")) {
    if (!j.at("par_time_ms").is_number_integer()) bad("'par_time_ms' must be an integer");
    m.par_time_ms = j.at("par_time_ms").get<std::int64_t>();
  }
  try {
    if (j.contains("snap")) m.snap = snap_config_from_json(j.at("snap"));
  } catch (const FormatError& e) {
    bad(std::string("'snap': ") + e.what());
  }
  if (j.contains("grading")) {
    const Json& g = j.at("grading");
    if (!g.is_object()) bad("'grading' must be an object");
    if (g.contains("accuracy_weight")) m.weights.accuracy = g.at("accuracy_weight").get<double>();
    if (g.contains("speed_weight")) m.weights.speed = g.at("speed_weight").get<double>();
  }
  if (j.contains("assets")) {
    if (!j.at("assets").is_object()) bad("'assets' must map asset ids to paths");
    for (const auto& [id, path] : j.at("assets").items()) {
      if (!path.is_string()) bad("asset '" + id + "' path must be a string");
      m.assets[id] = path.get<std::string>();
    }
  }

  if (!j.contains("parts") || !j.at("parts").is_array()) bad("'parts' must be an array");
  for (const Json& pj : j.at("parts")) {
    PartEntry p;
    p.part_id = string_at(pj, "part_id", "part");
    const std::string ctx = "part '" + p.part_id + "'";
    p.mesh_asset = string_at(pj, "mesh_asset", ctx);
    p.initial_pose = pose_at(pj, "initial_pose", ctx);
    if (pj.contains("threshold")) p.threshold = pj.at("threshold").get<double>();
    m.parts.push_back(std::move(p));
  }

  if (!j.contains("slots") || !j.at("slots").is_array()) bad("'slots' must be an array");
  for (const Json& sj : j.at("slots")) {
    SlotEntry s;
    s.slot_id = string_at(sj, "slot_id", "slot");
    const std::string ctx = "slot '" + s.slot_id + "'";
    s.expected_part = string_at(sj, "expected_part", ctx);
    s.target_pose = pose_at(sj, "target_pose", ctx);
    if (sj.contains("bim_asset")) s.bim_asset = string_at(sj, "bim_asset", ctx);
    if (sj.contains("bim_metrics")) {
      try {
        s.bim_metrics = metrics_from_json(sj.at("bim_metrics"));
      } catch (const FormatError& e) {
        bad(ctx + " 'bim_metrics': " + e.what());
      }
    }
    if (s.bim_asset.has_value() == s.bim_metrics.has_value()) bad(ctx + " needs exactly one of 'bim_asset' or 'bim_metrics'");
    m.slots.push_back(std::move(s));
  }

  // Referential integrity.
  std::set<std::string> part_ids;
  for (const PartEntry& p : m.parts) {
    if (!part_ids.insert(p.part_id).second) bad("duplicate part id '" + p.part_id + "'");
    if (!m.assets.contains(p.mesh_asset)) bad("part '" + p.part_id + "' references unknown asset '" + p.mesh_asset + "'");
  }
  std::set<std::string> expected;
  for (const SlotEntry& s : m.slots) {
    if (!part_ids.contains(s.expected_part)) bad("slot '" + s.slot_id + "' expects unknown part '" + s.expected_part + "'");
    if (!expected.insert(s.expected_part).second) bad("part '" + s.expected_part + "' has more than one slot");
    if (s.bim_asset && !m.assets.contains(*s.bim_asset)) bad("slot '" + s.slot_id + "' references unknown asset '" + *s.bim_asset + "'");
  }
  for (const PartEntry& p : m.parts) {
    if (!expected.contains(p.part_id)) bad("part '" + p.part_id + "' has no slot");
  }
  return m;
}

Json manifest_to_json(const SceneManifest& m) {
  Json j = Json::object();
  j["scene_id"] = m.scene_id;
  j["par_time_ms"] = m.par_time_ms;
  j["snap"] = snap_config_to_json(m.snap);
  j["grading"] = {{"accuracy_weight", m.weights.accuracy}, {"speed_weight", m.weights.speed}};
  Json assets = Json::object();
  for (const auto& [id, path] : m.assets) assets[id] = path;
  j["assets"] = std::move(assets);
  Json parts = Json::array();
  for (const PartEntry& p : m.parts) {
    Json pj = {{"part_id", p.part_id}, {"mesh_asset", p.mesh_asset}, {"initial_pose", pose_to_json(p.initial_pose)}};
    if (p.threshold) pj["threshold"] = *p.threshold;
    parts.push_back(std::move(pj));
  }
  j["parts"] = std::move(parts);
  Json slots = Json::array();
  for (const SlotEntry& s : m.slots) {
    Json sj = {{"slot_id", s.slot_id}, {"expected_part", s.expected_part}, {"target_pose", pose_to_json(s.target_pose)}};
    if (s.bim_asset) sj["bim_asset"] = *s.bim_asset;
    if (s.bim_metrics) sj["bim_metrics"] = metrics_to_json(*s.bim_metrics);
    slots.push_back(std::move(sj));
  }
  j["slots"] = std::move(slots);
  return j;
}

LoadedScene load_scene(const std::filesystem::path& dir) {
  LoadedScene out;
  out.root = dir;
  const auto manifest_path = dir / kManifestFile;
  std::ifstream in(manifest_path);
  if (!in) throw SceneError("cannot open manifest '" + manifest_path.string() + "'");
  try {
    out.manifest_json = Json::parse(in);
  } catch (const Json::exception& e) {
    throw SceneError("manifest '" + manifest_path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    out.manifest = parse_manifest(out.manifest_json);
  } catch (const Json::exception& e) {
    bad(e.what());
  }

  std::map<std::string, MacroMetrics> asset_metrics;
  auto metrics_of = [&](const std::string& asset_id) -> const MacroMetrics& {
    if (auto it = asset_metrics.find(asset_id); it != asset_metrics.end()) return it->second;
    const auto path = dir / out.manifest.assets.at(asset_id);
    if (!std::filesystem::exists(path)) throw SceneError("missing mesh asset '" + asset_id + "' at '" + path.string() + "'");
    try {
      TriangleMesh mesh = load_mesh(path);
      mesh.name = asset_id;
      const MacroMetrics m = compute_macro_metrics(mesh);
      out.meshes.emplace(asset_id, std::move(mesh));
      return asset_metrics.emplace(asset_id, m).first->second;
    } catch (const MeshError& e) {
      throw SceneError("mesh asset '" + asset_id + "' (" + path.string() + "): " + e.what());
    } catch (const std::runtime_error& e) {
      throw SceneError("mesh asset '" + asset_id + "' (" + path.string() + "): " + e.what());
    }
  };

  Scene& scene = out.scene;
  scene.id = out.manifest.scene_id;
  scene.par_time_ms = out.manifest.par_time_ms;
  scene.weights = out.manifest.weights;
  for (const PartEntry& p : out.manifest.parts) {
    scene.parts.push_back(PartSpec{p.part_id, metrics_of(p.mesh_asset), p.initial_pose, p.threshold});
  }
  for (const SlotEntry& s : out.manifest.slots) {
    const MacroMetrics bim = s.bim_metrics ? *s.bim_metrics : metrics_of(*s.bim_asset);
    scene.slots.push_back(SlotSpec{s.slot_id, s.expected_part, s.target_pose, bim});
  }
  // Load assets no part or slot uses too, so every served asset exists.
  for (const auto& [id, path] : out.manifest.assets) metrics_of(id);

  try {
    create_session(scene, out.manifest.snap);
  } catch (const SessionError& e) {
    throw SceneError(std::string("scene '") + scene.id + "' is not runnable: " + e.what());
  }
  return out;
}

}  // namespace asbuilt
