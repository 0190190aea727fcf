#include "asbuilt/json_io.hpp"

#include <cmath>

namespace asbuilt {

namespace {

[[noreturn]] void bad(const std::string& what) { throw FormatError(what); }

double number_at(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing key '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number()) bad(std::string("key '") + key + "' is not a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(std::string("key '") + key + "' is not finite");
  return d;
}

std::array<double, 3> triple(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) bad(std::string(what) + " must be an array of 3 numbers");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_number()) bad(std::string(what) + " must be an array of 3 numbers");
    out[i] = j[i].get<double>();
    if (!std::isfinite(out[i])) bad(std::string(what) + " has a non-finite component");
  }
  return out;
}

}  // namespace

Json metrics_to_json(const MacroMetrics& m) {
  Json j = Json::object();
  for (Parameter p : kAllParameters) j[std::string(parameter_key(p))] = parameter_value(m, p);
  return j;
}

MacroMetrics metrics_from_json(const Json& j) {
  MacroMetrics m;
  m.total_surface = number_at(j, "total_surface_mm2");
  m.aggregated_normals = {number_at(j, "normal_x"), number_at(j, "normal_y"), number_at(j, "normal_z")};
  m.dimension = {number_at(j, "dim_x_mm"), number_at(j, "dim_y_mm"), number_at(j, "dim_z_mm")};
  return m;
}

Json comparison_to_json(const ComparisonReport& r) {
  Json j = Json::object();
  j["threshold"] = r.threshold;
  j["overall_pass"] = r.overall_pass;
  j["max_difference"] = r.max_difference;
  j["worst_parameter"] = std::string(parameter_key(r.worst_parameter));
  for (const ParameterComparison& c : r.per_parameter) {
    const std::string key(parameter_key(c.parameter));
    j[key + "_bim"] = c.bim_value;
    j[key + "_scanned"] = c.scanned_value;
    j[key + "_diff"] = c.relative_difference;
    j[key + "_pass"] = c.pass;
  }
  return j;
}

Json validation_to_json(const ValidationReport& r) {
  Json j = Json::object();
  j["ok"] = r.ok;
  j["vertex_count"] = r.vertex_count;
  j["face_count"] = r.face_count;
  j["degenerate_faces"] = r.degenerate_faces;
  j["out_of_range_indices"] = r.out_of_range_indices;
  j["non_finite_vertices"] = r.non_finite_vertices;
  j["too_small"] = r.too_small;
  return j;
}

Json pose_to_json(const Pose& p) {
  Json j = Json::object();
  j["translation"] = {p.translation.x, p.translation.y, p.translation.z};
  j["rotation"] = {p.rotation.w, p.rotation.x, p.rotation.y, p.rotation.z};
  return j;
}

Pose pose_from_json(const Json& j) {
  if (!j.is_object()) bad("pose must be an object");
  Pose p;
  if (j.contains("translation")) {
    const auto t = triple(j.at("translation"), "pose translation");
    p.translation = {t[0], t[1], t[2]};
  }
  if (j.contains("rotation")) {
    const Json& r = j.at("rotation");
    if (!r.is_array() || r.size() != 4) bad("pose rotation must be [w, x, y, z]");
    for (const Json& c : r) {
      if (!c.is_number() || !std::isfinite(c.get<double>())) bad("pose rotation must be 4 finite numbers");
    }
    Quat q{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()};
    if (!is_unit(q)) {
      try {
        q = normalized(q);
      } catch (const std::invalid_argument& e) {
        bad(e.what());
      }
    }
    p.rotation = q;
  }
  return p;
}

Json snap_config_to_json(const SnapConfig& c) {
  Json j = Json::object();
  if (c.snap_radius_mm) {
    j["snap_radius_mm"] = *c.snap_radius_mm;
  } else {
    j["snap_radius_mm"] = nullptr;
  }
  j["max_angle_deg"] = c.max_angle_deg;
  j["threshold"] = c.threshold;
  return j;
}

SnapConfig snap_config_from_json(const Json& j) {
  SnapConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) bad("snap config must be an object");
  if (j.contains("snap_radius_mm") && !j.at("snap_radius_mm").is_null()) c.snap_radius_mm = number_at(j, "snap_radius_mm");
  if (j.contains("max_angle_deg")) c.max_angle_deg = number_at(j, "max_angle_deg");
  if (j.contains("threshold")) c.threshold = number_at(j, "threshold");
  return c;
}

Json event_to_json(const SessionEvent& e) {
  Json j = Json::object();
  j["timestamp_ms"] = e.timestamp_ms;
  j["kind"] = to_string(e.kind);
  if (e.kind != EventKind::EndSession) j["part_id"] = e.part_id;
  if (e.pose) j["pose"] = pose_to_json(*e.pose);
  return j;
}

SessionEvent event_from_json(const Json& j) {
  if (!j.is_object()) bad("event must be an object");
  SessionEvent e;
  if (!j.contains("timestamp_ms") || !j.at("timestamp_ms").is_number_integer()) bad("event needs integer 'timestamp_ms'");
  e.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
  if (!j.contains("kind") || !j.at("kind").is_string()) bad("event needs string 'kind'");
  const auto kind = event_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) bad("unknown event kind '" + j.at("kind").get<std::string>() + "'");
  e.kind = *kind;
  if (e.kind != EventKind::EndSession) {
    if (!j.contains("part_id") || !j.at("part_id").is_string()) bad("event needs string 'part_id'");
    e.part_id = j.at("part_id").get<std::string>();
  }
  if (j.contains("pose") && !j.at("pose").is_null()) e.pose = pose_from_json(j.at("pose"));
  if (e.kind == EventKind::Move && !e.pose) bad("Move event needs 'pose'");
  return e;
}

std::string event_to_line(const SessionEvent& e) { return event_to_json(e).dump(); }

SessionEvent event_from_line(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& err) {
    bad(std::string("event line is not JSON: ") + err.what());
  }
  return event_from_json(j);
}

std::vector<SessionEvent> read_event_log(std::istream& in) {
  std::vector<SessionEvent> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(event_from_line(line));
    } catch (const FormatError& e) {
      bad("event log line " + std::to_string(no) + ": " + e.what());
    }
  }
  return out;
}

void write_event_log(std::ostream& out, const std::vector<SessionEvent>& events) {
  for (const SessionEvent& e : events) out << event_to_line(e) << '\n';
}

Json snap_outcome_to_json(const SnapOutcome& o) {
  Json j = Json::object();
  j["outcome"] = outcome_name(o);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        j["slot_id"] = v.slot_id;
        if constexpr (std::is_same_v<T, RejectedQuality>) {
          j["report"] = comparison_to_json(v.report);
        } else if constexpr (std::is_same_v<T, OutOfRange>) {
          j["distance_mm"] = v.distance_mm;
          j["angle_deg"] = v.angle_deg;
        }
      },
      o);
  return j;
}

Json event_result_to_json(const EventResult& r) {
  Json j = Json::object();
  j["index"] = r.index;
  j["timestamp_ms"] = r.event.timestamp_ms;
  j["kind"] = to_string(r.event.kind);
  if (r.event.kind != EventKind::EndSession) j["part_id"] = r.event.part_id;
  if (r.part_state) j["state"] = to_string(*r.part_state);
  if (r.snap) j["snap"] = snap_outcome_to_json(*r.snap);
  if (r.warning) j["warning"] = *r.warning;
  return j;
}

Json part_state_to_json(const Part& p) {
  Json j = Json::object();
  j["part_id"] = p.id;
  j["state"] = to_string(p.state);
  j["pose"] = pose_to_json(p.pose);
  return j;
}

Json score_to_json(const SessionScore& s) {
  Json j = Json::object();
  j["accuracy"] = s.accuracy;
  j["elapsed_ms"] = s.elapsed_ms;
  j["par_time_ms"] = s.par_time_ms;
  j["grade"] = s.grade;
  j["correct_parts"] = s.correct_parts;
  j["total_parts"] = s.total_parts;
  return j;
}

Json session_report(const AssemblySession& session) {
  Json j = Json::object();
  j["scene_id"] = session.scene_id();
  j["status"] = session.ended() ? "ended" : "active";
  j["clock_ms"] = session.clock_ms();
  j["event_count"] = session.log().size();
  Json parts = Json::array();
  for (const Part& p : session.parts()) {
    Json pj = part_state_to_json(p);
    pj["slot_id"] = session.slot_for(p).id;
    const ComparisonReport rep = session.part_report(p);
    pj["conforming"] = rep.overall_pass;
    pj["comparison"] = comparison_to_json(rep);
    parts.push_back(std::move(pj));
  }
  j["parts"] = std::move(parts);
  j["score"] = session.ended() ? score_to_json(grade_session(session)) : Json(nullptr);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace asbuilt
