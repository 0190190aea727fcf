// asbuilt: batch quality control, validation, replay and serving for
// scan-vs-BIM part assembly.
//
// Exit codes: 0 pass/success, 1 quality fail (or event-order violation on
// replay), 2 usage or I/O error.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "asbuilt/assembly.hpp"
#include "asbuilt/discrepancy.hpp"
#include "asbuilt/json_io.hpp"
#include "asbuilt/mesh_io.hpp"
#include "asbuilt/metrics.hpp"
#include "asbuilt/scene.hpp"
#include "asbuilt/service.hpp"

namespace {

using namespace asbuilt;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

TriangleMesh load_with_format(const std::string& path, const std::string& format) {
  if (format == "auto") return load_mesh(path);
  const auto bytes = read_file(path);
  TriangleMesh mesh = parse_mesh(bytes, format == "obj" ? MeshFormat::Obj : detect_stl_format(bytes));
  mesh.name = std::filesystem::path(path).stem().string();
  return mesh;
}

/// A metrics record (.json) or a mesh file.
MacroMetrics resolve_metrics(const std::string& path) {
  if (std::filesystem::path(path).extension() == ".json") {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
      return metrics_from_json(Json::parse(in));
    } catch (const Json::exception& e) {
      throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
  }
  return compute_macro_metrics(load_mesh(path));
}

void print_metrics_table(std::ostream& out, const MacroMetrics& m) {
  out << "parameter            X            Y            Z\n";
  out << "total_surface_mm2    " << fmt6(m.total_surface) << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "aggregated_normals   %-12s %-12s %-12s\n", fmt6(m.aggregated_normals[0]).c_str(),
                fmt6(m.aggregated_normals[1]).c_str(), fmt6(m.aggregated_normals[2]).c_str());
  out << line;
  std::snprintf(line, sizeof line, "dimension_mm         %-12s %-12s %-12s\n", fmt6(m.dimension[0]).c_str(),
                fmt6(m.dimension[1]).c_str(), fmt6(m.dimension[2]).c_str());
  out << line;
}

void print_comparison(std::ostream& out, const ComparisonReport& r) {
  char line[200];
  std::snprintf(line, sizeof line, "%-18s %-12s %-12s %-10s %s\n", "parameter", "bim", "scanned", "rel_diff", "verdict");
  out << line;
  for (const ParameterComparison& c : r.per_parameter) {
    std::snprintf(line, sizeof line, "%-18s %-12s %-12s %-10s %s\n", std::string(parameter_key(c.parameter)).c_str(),
                  fmt6(c.bim_value).c_str(), fmt6(c.scanned_value).c_str(), fmt6(c.relative_difference).c_str(),
                  c.pass ? "pass" : "FAIL");
    out << line;
  }
  out << "threshold " << fmt6(r.threshold) << ", max difference " << fmt6(r.max_difference) << " at "
      << parameter_key(r.worst_parameter) << "\n";
  out << "overall: " << (r.overall_pass ? "PASS" : "FAIL") << "\n";
}

int cmd_metrics(const std::string& path, const std::string& format, bool json) {
  const MacroMetrics m = compute_macro_metrics(load_with_format(path, format));
  if (json) {
    std::cout << dump(metrics_to_json(m));
  } else {
    print_metrics_table(std::cout, m);
  }
  return kExitOk;
}

int cmd_compare(const std::string& bim_path, const std::string& scanned_path, double threshold, bool json) {
  require_threshold(threshold);
  const ComparisonReport r = compare_metrics(resolve_metrics(bim_path), resolve_metrics(scanned_path), threshold);
  if (json) {
    std::cout << dump(comparison_to_json(r));
  } else {
    print_comparison(std::cout, r);
  }
  return r.overall_pass ? kExitOk : kExitFail;
}

int cmd_validate(const std::string& path, const std::string& format, bool json) {
  TriangleMesh mesh;
  try {
    mesh = load_with_format(path, format);
  } catch (const MeshError& e) {
    // The file parsed but breaks a mesh invariant: a verdict, not an I/O error.
    if (e.code() != MeshErrc::IndexOutOfRange && e.code() != MeshErrc::EmptyMesh) throw;
    if (json) {
      Json j = Json::object();
      j["ok"] = false;
      j["error"] = to_string(e.code());
      j["message"] = e.what();
      std::cout << dump(j);
    } else {
      std::cout << "NOT OK: " << to_string(e.code()) << ": " << e.what() << "\n";
    }
    return kExitFail;
  }
  const ValidationReport r = validate_mesh(mesh);
  if (json) {
    std::cout << dump(validation_to_json(r));
  } else {
    std::cout << (r.ok ? "ok" : "NOT OK") << ": " << r.vertex_count << " vertices, " << r.face_count << " faces, "
              << r.degenerate_faces << " degenerate, " << r.out_of_range_indices << " out-of-range indices, "
              << r.non_finite_vertices << " non-finite vertices\n";
  }
  return r.ok ? kExitOk : kExitFail;
}

int cmd_replay(const std::string& scene_dir, const std::string& log_path, bool json) {
  const LoadedScene scene = load_scene(scene_dir);
  std::ifstream in(log_path);
  if (!in) throw std::runtime_error("cannot open session log '" + log_path + "'");
  const std::vector<SessionEvent> log = read_event_log(in);
  AssemblySession session = create_session(scene.scene, scene.manifest.snap);
  try {
    for (const SessionEvent& e : log) session.apply(e);
  } catch (const SessionError& e) {
    std::cerr << "replay: " << to_string(e.code()) << ": " << e.what() << "\n";
    const bool order = e.code() == SessionErrc::OutOfOrderEvent || e.code() == SessionErrc::SessionEnded;
    return order ? kExitFail : kExitError;
  }
  const Json report = session_report(session);
  if (json) {
    std::cout << dump(report);
    return kExitOk;
  }
  for (const EventResult& r : session.results()) {
    if (r.warning) std::cout << "warning @" << r.event.timestamp_ms << " ms: " << *r.warning << "\n";
  }
  for (const Part& p : session.parts()) {
    std::cout << "part " << p.id << ": " << to_string(p.state) << (session.conforming(p) ? " (conforming)" : " (non-conforming)")
              << "\n";
  }
  if (session.ended()) {
    const SessionScore s = grade_session(session);
    std::cout << "accuracy " << fmt6(s.accuracy) << " (" << s.correct_parts << "/" << s.total_parts << "), elapsed "
              << s.elapsed_ms << " ms, par " << s.par_time_ms << " ms, grade " << fmt6(s.grade) << "\n";
  } else {
    std::cout << "session not ended; no grade\n";
  }
  return kExitOk;
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const std::string& scene_dir, const std::string& bind, const std::string& data_dir) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--bind", "expected host:port");
  const std::string host = bind.substr(0, colon);
  const int port = std::stoi(bind.substr(colon + 1));

  LoadedScene scene = load_scene(scene_dir);
  const std::filesystem::path data =
      data_dir.empty() ? std::filesystem::path(scene_dir) / "logs" / "sessions" : std::filesystem::path(data_dir);
  SessionService service(std::move(scene), data);
  HttpServer server(service);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "serve: cannot bind " << bind << "\n";
    return kExitError;
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "serving scene '" << service.loaded_scene().scene.id << "' on " << host << ":" << bound
            << " (sessions in " << data.string() << ")\n";
  server.listen();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"As-built part quality control and virtual assembly"};
  app.require_subcommand(1);

  std::string mesh_path, format = "auto";
  bool json = false;
  auto* metrics = app.add_subcommand("metrics", "Print total surface, dimensions and aggregated normals of a mesh");
  metrics->add_option("mesh", mesh_path, "STL or OBJ file")->required();
  metrics->add_option("--format", format, "auto|stl|obj")->check(CLI::IsMember({"auto", "stl", "obj"}));
  metrics->add_flag("--json", json, "Machine-readable output");

  std::string bim_path, scanned_path;
  double threshold = kDefaultThreshold;
  auto* compare = app.add_subcommand("compare", "Compare a scanned part against its BIM reference");
  compare->add_option("bim", bim_path, "BIM mesh or metrics record (.json)")->required();
  compare->add_option("scanned", scanned_path, "Scanned mesh or metrics record (.json)")->required();
  compare->add_option("--threshold", threshold, "Acceptable relative difference in (0, 1]");
  compare->add_flag("--json", json, "Machine-readable output");

  auto* validate = app.add_subcommand("validate", "Check mesh invariants and count degenerate faces");
  validate->add_option("mesh", mesh_path, "STL or OBJ file")->required();
  validate->add_option("--format", format, "auto|stl|obj")->check(CLI::IsMember({"auto", "stl", "obj"}));
  validate->add_flag("--json", json, "Machine-readable output");

  std::string scene_dir, log_path;
  auto* replay_cmd = app.add_subcommand("replay", "Replay a session log against a scene and grade it");
  replay_cmd->add_option("scene-dir", scene_dir, "Scene directory")->required();
  replay_cmd->add_option("session-log", log_path, "Line-delimited event log")->required();
  replay_cmd->add_flag("--json", json, "Machine-readable output");

  std::string bind = "127.0.0.1:8080", data_dir;
  auto* serve = app.add_subcommand("serve", "Run the session service for a scene");
  serve->add_option("scene-dir", scene_dir, "Scene directory")->required();
  serve->add_option("--bind", bind, "host:port");
  serve->add_option("--data-dir", data_dir, "Session persistence directory (default <scene-dir>/logs/sessions)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*metrics) return cmd_metrics(mesh_path, format, json);
    if (*compare) return cmd_compare(bim_path, scanned_path, threshold, json);
    if (*validate) return cmd_validate(mesh_path, format, json);
    if (*replay_cmd) return cmd_replay(scene_dir, log_path, json);
    if (*serve) return cmd_serve(scene_dir, bind, data_dir);
  } catch (const MeshError& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}
