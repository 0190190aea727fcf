#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "asbuilt/assembly.hpp"
#include "asbuilt/json_io.hpp"
#include "asbuilt/scene.hpp"

namespace httplib {
class Server;
}

namespace asbuilt {

/// Transport-independent response: HTTP status plus either a JSON body or
/// raw bytes with a content type.
struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";

  static Response json(int status, const Json& j);
  static Response error(int status, const std::string& code, const std::string& message);
};

/// Session lifecycle over one loaded scene. Persistence is one append-only
/// event log plus one metadata file per session under the data directory;
/// constructing a service replays whatever is already there.
///
/// Thread safety: calls for different sessions run in parallel; calls for the
/// same session are serialized on that session's mutex.
class SessionService {
 public:
  SessionService(LoadedScene scene, std::filesystem::path data_dir);
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  Response create_session(std::string_view body);
  Response scene(std::string_view scene_id) const;
  Response asset(std::string_view asset_id) const;
  Response post_events(std::string_view session_id, std::string_view body);
  Response state(std::string_view session_id) const;
  Response report(std::string_view session_id) const;
  Response list_sessions() const;

  const LoadedScene& loaded_scene() const { return scene_; }
  const std::filesystem::path& data_dir() const { return data_dir_; }

 private:
  struct Entry;

  std::shared_ptr<Entry> find(std::string_view session_id) const;
  void restore();
  std::filesystem::path log_path(const std::string& id) const;
  std::filesystem::path meta_path(const std::string& id) const;

  LoadedScene scene_;
  std::filesystem::path data_dir_;
  std::map<std::string, std::string> stl_assets_;  // asset id -> binary STL bytes

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>, std::less<>> sessions_;
  std::uint64_t next_id_ = 1;
};

/// HTTP binding of SessionService (cpp-httplib).
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  /// Binds host:port; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();
  bool running() const;

 private:
  SessionService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace asbuilt
