#include "asbuilt/service.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>

#include "asbuilt/mesh_io.hpp"

namespace asbuilt {

struct SessionService::Entry {
  std::string id;
  std::string scene_id;
  std::int64_t created_ms = 0;  // wall clock, epoch milliseconds
  std::uint64_t last_seq = 0;
  mutable std::mutex mutex;
  std::optional<AssemblySession> session;
};

Response Response::json(int status, const Json& j) { return {status, dump(j), "application/json"}; }

Response Response::error(int status, const std::string& code, const std::string& message) {
  Json j = Json::object();
  j["error"] = code;
  j["message"] = message;
  return json(status, j);
}

namespace {

int status_for(SessionErrc code) {
  switch (code) {
    case SessionErrc::OutOfOrderEvent:
    case SessionErrc::SessionEnded: return 409;
    case SessionErrc::UnknownPart: return 404;
    default: return 400;
  }
}

std::string format_id(std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(n));
  return buf;
}

std::optional<std::uint64_t> parse_id(std::string_view id) {
  if (id.size() < 2 || id[0] != 's') return std::nullopt;
  std::uint64_t n = 0;
  for (char c : id.substr(1)) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + std::uint64_t(c - '0');
  }
  return n;
}

std::optional<Json> parse_body(std::string_view body) {
  try {
    return Json::parse(body);
  } catch (const Json::parse_error&) {
    return std::nullopt;
  }
}

}  // namespace

SessionService::SessionService(LoadedScene scene, std::filesystem::path data_dir)
    : scene_(std::move(scene)), data_dir_(std::move(data_dir)) {
  for (const auto& [id, mesh] : scene_.meshes) {
    const auto bytes = write_mesh(mesh, MeshFormat::StlBinary);
    stl_assets_.emplace(id, std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  }
  std::filesystem::create_directories(data_dir_);
  restore();
}

SessionService::~SessionService() = default;

std::filesystem::path SessionService::log_path(const std::string& id) const { return data_dir_ / (id + ".events.jsonl"); }
std::filesystem::path SessionService::meta_path(const std::string& id) const { return data_dir_ / (id + ".session.json"); }

void SessionService::restore() {
  std::vector<std::filesystem::path> metas;
  for (const auto& f : std::filesystem::directory_iterator(data_dir_)) {
    const std::string name = f.path().filename().string();
    if (name.ends_with(".session.json")) metas.push_back(f.path());
  }
  std::sort(metas.begin(), metas.end());
  for (const auto& path : metas) {
    std::ifstream in(path);
    const Json meta = Json::parse(in);
    auto entry = std::make_shared<Entry>();
    entry->id = meta.at("session_id").get<std::string>();
    entry->scene_id = meta.at("scene_id").get<std::string>();
    entry->created_ms = meta.at("created_ms").get<std::int64_t>();
    if (entry->scene_id != scene_.scene.id) continue;
    entry->session = asbuilt::create_session(scene_.scene, scene_.manifest.snap);

    std::ifstream log(log_path(entry->id));
    std::string line;
    while (std::getline(log, line)) {
      if (line.empty()) continue;
      const Json j = Json::parse(line);
      entry->last_seq = std::max(entry->last_seq, j.value("batch", std::uint64_t{0}));
      entry->session->apply(event_from_json(j));
    }
    if (auto n = parse_id(entry->id)) next_id_ = std::max(next_id_, *n + 1);
    sessions_.emplace(entry->id, std::move(entry));
  }
}

std::shared_ptr<SessionService::Entry> SessionService::find(std::string_view session_id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response SessionService::create_session(std::string_view body) {
  const auto j = parse_body(body);
  if (!j || !j->is_object() || !j->contains("scene_id") || !j->at("scene_id").is_string()) {
    return Response::error(400, "MalformedRequest", "body must be {\"scene_id\": <string>}");
  }
  const std::string scene_id = j->at("scene_id").get<std::string>();
  if (scene_id != scene_.scene.id) return Response::error(404, "UnknownScene", "unknown scene '" + scene_id + "'");

  auto entry = std::make_shared<Entry>();
  entry->scene_id = scene_id;
  entry->created_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::system_clock::now().time_since_epoch())
                          .count();
  entry->session = asbuilt::create_session(scene_.scene, scene_.manifest.snap);
  {
    std::unique_lock lock(sessions_mutex_);
    entry->id = format_id(next_id_++);
    Json meta = Json::object();
    meta["session_id"] = entry->id;
    meta["scene_id"] = entry->scene_id;
    meta["created_ms"] = entry->created_ms;
    std::ofstream(log_path(entry->id), std::ios::app);
    std::ofstream out(meta_path(entry->id));
    out << dump(meta);
    if (!out) return Response::error(500, "PersistenceFailure", "cannot write session metadata");
    sessions_.emplace(entry->id, entry);
  }
  Json r = Json::object();
  r["session_id"] = entry->id;
  return Response::json(201, r);
}

Response SessionService::scene(std::string_view scene_id) const {
  if (scene_id != scene_.scene.id) return Response::error(404, "UnknownScene", "unknown scene '" + std::string(scene_id) + "'");
  return Response::json(200, manifest_to_json(scene_.manifest));
}

Response SessionService::asset(std::string_view asset_id) const {
  auto it = stl_assets_.find(std::string(asset_id));
  if (it == stl_assets_.end()) return Response::error(404, "UnknownAsset", "unknown asset '" + std::string(asset_id) + "'");
  return {200, it->second, "model/stl"};
}

Response SessionService::post_events(std::string_view session_id, std::string_view body) {
  auto entry = find(session_id);
  if (!entry) return Response::error(404, "UnknownSession", "unknown session '" + std::string(session_id) + "'");

  const auto j = parse_body(body);
  if (!j || !j->is_object() || !j->contains("seq") || !j->at("seq").is_number_unsigned() || !j->contains("events") ||
      !j->at("events").is_array()) {
    return Response::error(400, "MalformedRequest", "body must be {\"seq\": <unsigned>, \"events\": [...]}");
  }
  const auto seq = j->at("seq").get<std::uint64_t>();
  std::vector<SessionEvent> events;
  try {
    for (const Json& e : j->at("events")) events.push_back(event_from_json(e));
  } catch (const FormatError& e) {
    return Response::error(400, "MalformedEvent", e.what());
  }

  std::lock_guard lock(entry->mutex);
  if (seq <= entry->last_seq) {
    return Response::error(409, "DuplicateBatch",
                           "batch " + std::to_string(seq) + " already applied (last " + std::to_string(entry->last_seq) + ")");
  }
  // Apply to a copy so a failing batch leaves the session untouched.
  AssemblySession next = *entry->session;
  Json outcomes = Json::array();
  try {
    for (const SessionEvent& e : events) outcomes.push_back(event_result_to_json(next.apply(e)));
  } catch (const SessionError& e) {
    return Response::error(status_for(e.code()), to_string(e.code()), e.what());
  }

  {
    std::ofstream log(log_path(entry->id), std::ios::app);
    for (const SessionEvent& e : events) {
      Json line = event_to_json(e);
      line["batch"] = seq;
      log << line.dump() << '\n';
    }
    log.flush();
    if (!log) return Response::error(500, "PersistenceFailure", "cannot append to session log");
  }
  entry->session = std::move(next);
  entry->last_seq = seq;

  Json r = Json::object();
  r["seq"] = seq;
  r["outcomes"] = std::move(outcomes);
  Json states = Json::array();
  for (const Part& p : entry->session->parts()) states.push_back(part_state_to_json(p));
  r["states"] = std::move(states);
  r["status"] = entry->session->ended() ? "ended" : "active";
  return Response::json(200, r);
}

Response SessionService::state(std::string_view session_id) const {
  auto entry = find(session_id);
  if (!entry) return Response::error(404, "UnknownSession", "unknown session '" + std::string(session_id) + "'");
  std::lock_guard lock(entry->mutex);
  Json r = Json::object();
  r["session_id"] = entry->id;
  r["status"] = entry->session->ended() ? "ended" : "active";
  r["clock_ms"] = entry->session->clock_ms();
  r["last_seq"] = entry->last_seq;
  Json states = Json::array();
  for (const Part& p : entry->session->parts()) states.push_back(part_state_to_json(p));
  r["states"] = std::move(states);
  return Response::json(200, r);
}

Response SessionService::report(std::string_view session_id) const {
  auto entry = find(session_id);
  if (!entry) return Response::error(404, "UnknownSession", "unknown session '" + std::string(session_id) + "'");
  std::lock_guard lock(entry->mutex);
  Json r = Json::object();
  r["session_id"] = entry->id;
  r.update(session_report(*entry->session));
  return Response::json(200, r);
}

Response SessionService::list_sessions() const {
  std::vector<std::shared_ptr<Entry>> entries;
  {
    std::shared_lock lock(sessions_mutex_);
    for (const auto& [id, e] : sessions_) entries.push_back(e);
  }
  Json list = Json::array();
  for (const auto& e : entries) {
    std::lock_guard lock(e->mutex);
    Json j = Json::object();
    j["session_id"] = e->id;
    j["scene_id"] = e->scene_id;
    j["created_ms"] = e->created_ms;
    j["status"] = e->session->ended() ? "ended" : "active";
    j["event_count"] = e->session->log().size();
    list.push_back(std::move(j));
  }
  Json r = Json::object();
  r["sessions"] = std::move(list);
  return Response::json(200, r);
}

}  // namespace asbuilt
