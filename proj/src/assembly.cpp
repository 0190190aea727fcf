#include "asbuilt/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace asbuilt {

const char* to_string(SessionErrc code) {
  switch (code) {
    case SessionErrc::InvalidScene: return "InvalidScene";
    case SessionErrc::InvalidConfig: return "InvalidConfig";
    case SessionErrc::InvalidEvent: return "InvalidEvent";
    case SessionErrc::OutOfOrderEvent: return "OutOfOrderEvent";
    case SessionErrc::UnknownPart: return "UnknownPart";
    case SessionErrc::SessionEnded: return "SessionEnded";
    case SessionErrc::SessionNotEnded: return "SessionNotEnded";
  }
  return "Unknown";
}

const char* to_string(PartState state) {
  switch (state) {
    case PartState::Free: return "Free";
    case PartState::Grabbed: return "Grabbed";
    case PartState::Snapped: return "Snapped";
    case PartState::FlaggedDefective: return "FlaggedDefective";
  }
  return "Unknown";
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Grab: return "Grab";
    case EventKind::Move: return "Move";
    case EventKind::Release: return "Release";
    case EventKind::FlagDefective: return "FlagDefective";
    case EventKind::EndSession: return "EndSession";
  }
  return "Unknown";
}

std::optional<EventKind> event_kind_from_string(std::string_view name) {
  for (EventKind k : {EventKind::Grab, EventKind::Move, EventKind::Release, EventKind::FlagDefective,
                      EventKind::EndSession}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

const char* outcome_name(const SnapOutcome& outcome) {
  struct Visitor {
    const char* operator()(const Snapped&) const { return "Snapped"; }
    const char* operator()(const RejectedQuality&) const { return "RejectedQuality"; }
    const char* operator()(const OutOfRange&) const { return "OutOfRange"; }
  };
  return std::visit(Visitor{}, outcome);
}

namespace {

[[noreturn]] void fail(SessionErrc code, const std::string& what) { throw SessionError(code, what); }

bool metrics_present(const MacroMetrics& m) {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!(m.total_surface > 0.0) || !std::isfinite(m.total_surface)) return false;
  for (std::size_t d = 0; d < 3; ++d) {
    if (!finite_nonneg(m.dimension[d]) || !finite_nonneg(m.aggregated_normals[d])) return false;
    if (m.aggregated_normals[d] > 1.0) return false;
  }
  return true;
}

bool pose_valid(const Pose& p) { return is_finite(p.translation) && is_unit(p.rotation); }

}  // namespace

void validate(const SnapConfig& config) {
  if (config.snap_radius_mm && !(*config.snap_radius_mm > 0.0 && std::isfinite(*config.snap_radius_mm))) {
    fail(SessionErrc::InvalidConfig, "snap_radius must be > 0");
  }
  if (!(config.max_angle_deg > 0.0 && config.max_angle_deg <= 180.0)) {
    fail(SessionErrc::InvalidConfig, "max_angle must be in (0, 180]");
  }
  if (!valid_threshold(config.threshold)) fail(SessionErrc::InvalidConfig, "threshold must be in (0, 1]");
}

void validate(const GradingWeights& weights) {
  if (!(weights.accuracy >= 0.0 && weights.speed >= 0.0) ||
      std::abs(weights.accuracy + weights.speed - 1.0) > 1e-9) {
    fail(SessionErrc::InvalidConfig, "grading weights must be non-negative and sum to 1");
  }
}

double effective_snap_radius(const Slot& slot, const SnapConfig& config) {
  if (config.snap_radius_mm) return *config.snap_radius_mm;
  const auto& d = slot.bim_metrics.dimension;
  return kDefaultSnapRadiusFraction * std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
}

SnapOutcome try_snap(const Part& part, const Slot& slot, const SnapConfig& config) {
  ComparisonReport report = compare_metrics(slot.bim_metrics, part.metrics, config.threshold);
  if (!report.overall_pass) return RejectedQuality{slot.id, std::move(report)};
  const double distance = translation_distance(part.pose, slot.target_pose);
  const double angle = rotation_angle(part.pose, slot.target_pose);
  if (distance <= effective_snap_radius(slot, config) && angle <= config.max_angle_deg) return Snapped{slot.id};
  return OutOfRange{slot.id, distance, angle};
}

double grade_formula(double accuracy, std::int64_t elapsed_ms, std::int64_t par_time_ms,
                     const GradingWeights& weights) {
  const double speed = elapsed_ms <= 0 ? 1.0 : std::min(1.0, double(par_time_ms) / double(elapsed_ms));
  return std::clamp(100.0 * (weights.accuracy * accuracy + weights.speed * speed), 0.0, 100.0);
}

AssemblySession AssemblySession::create(const Scene& scene, const SnapConfig& config) {
  validate(config);
  validate(scene.weights);
  if (scene.par_time_ms <= 0) fail(SessionErrc::InvalidScene, "par_time_ms must be positive");
  if (scene.parts.empty()) fail(SessionErrc::InvalidScene, "scene has no parts");

  AssemblySession s;
  s.scene_id_ = scene.id;
  s.config_ = config;
  s.par_time_ms_ = scene.par_time_ms;
  s.weights_ = scene.weights;

  std::set<std::string> part_ids;
  for (const PartSpec& p : scene.parts) {
    if (p.id.empty() || !part_ids.insert(p.id).second) fail(SessionErrc::InvalidScene, "duplicate or empty part id '" + p.id + "'");
    if (!metrics_present(p.metrics)) fail(SessionErrc::InvalidScene, "part '" + p.id + "' has missing or invalid metrics");
    if (!pose_valid(p.initial_pose)) fail(SessionErrc::InvalidScene, "part '" + p.id + "' has an invalid initial pose");
    if (p.threshold && !valid_threshold(*p.threshold)) fail(SessionErrc::InvalidScene, "part '" + p.id + "' threshold outside (0, 1]");
    s.parts_.push_back(Part{p.id, p.metrics, p.initial_pose, PartState::Free, p.threshold});
  }

  std::set<std::string> slot_ids;
  std::set<std::string> expected;
  for (const SlotSpec& sl : scene.slots) {
    if (sl.id.empty() || !slot_ids.insert(sl.id).second) fail(SessionErrc::InvalidScene, "duplicate or empty slot id '" + sl.id + "'");
    if (!part_ids.contains(sl.expected_part)) {
      fail(SessionErrc::InvalidScene, "slot '" + sl.id + "' expects unknown part '" + sl.expected_part + "'");
    }
    if (!expected.insert(sl.expected_part).second) {
      fail(SessionErrc::InvalidScene, "part '" + sl.expected_part + "' is expected by more than one slot");
    }
    if (!metrics_present(sl.bim_metrics)) fail(SessionErrc::InvalidScene, "slot '" + sl.id + "' has missing or invalid BIM metrics");
    if (!pose_valid(sl.target_pose)) fail(SessionErrc::InvalidScene, "slot '" + sl.id + "' has an invalid target pose");
    s.slots_.push_back(Slot{sl.id, sl.target_pose, sl.bim_metrics, sl.expected_part});
  }
  for (const PartSpec& p : scene.parts) {
    if (!expected.contains(p.id)) fail(SessionErrc::InvalidScene, "part '" + p.id + "' has no slot");
  }
  return s;
}

const Part* AssemblySession::find_part(std::string_view id) const {
  for (const Part& p : parts_) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const Slot& AssemblySession::slot_for(const Part& part) const {
  for (const Slot& s : slots_) {
    if (s.expected_part == part.id) return s;
  }
  fail(SessionErrc::InvalidScene, "no slot for part '" + part.id + "'");
}

SnapConfig AssemblySession::config_for(const Part& part) const {
  SnapConfig c = config_;
  if (part.threshold) c.threshold = *part.threshold;
  return c;
}

ComparisonReport AssemblySession::part_report(const Part& part) const {
  return compare_metrics(slot_for(part).bim_metrics, part.metrics, config_for(part).threshold);
}

EventResult AssemblySession::apply(const SessionEvent& event) {
  if (ended_) fail(SessionErrc::SessionEnded, "session already ended");
  if (event.timestamp_ms < clock_ms_) {
    fail(SessionErrc::OutOfOrderEvent, "event at " + std::to_string(event.timestamp_ms) +
                                           " ms precedes last applied event at " + std::to_string(clock_ms_) + " ms");
  }
  if (event.timestamp_ms < 0) fail(SessionErrc::OutOfOrderEvent, "negative timestamp");

  EventResult result;
  result.index = log_.size();
  result.event = event;

  if (event.kind == EventKind::EndSession) {
    ended_ = true;
  } else {
    auto it = std::find_if(parts_.begin(), parts_.end(), [&](const Part& p) { return p.id == event.part_id; });
    if (it == parts_.end()) fail(SessionErrc::UnknownPart, "unknown part '" + event.part_id + "'");
    Part& part = *it;
    if (event.kind == EventKind::Move && (!event.pose || !pose_valid(*event.pose))) {
      fail(SessionErrc::InvalidEvent, "Move event for '" + part.id + "' needs a valid pose");
    }
    auto reject = [&](const char* why) {
      result.warning = std::string(to_string(event.kind)) + " ignored: part '" + part.id + "' is " +
                       to_string(part.state) + (why[0] ? std::string(" (") + why + ")" : std::string());
    };

    switch (event.kind) {
      case EventKind::Grab:
        if (part.state == PartState::Free) {
          part.state = PartState::Grabbed;
        } else {
          reject("");
        }
        break;
      case EventKind::Move:
        if (part.state == PartState::Grabbed) {
          part.pose = *event.pose;
        } else {
          reject("not grabbed");
        }
        break;
      case EventKind::Release:
        if (part.state != PartState::Grabbed) {
          reject("not grabbed");
          break;
        }
        {
          // Nearest slot expecting this part, by translation distance.
          const Slot* best = nullptr;
          double best_d = std::numeric_limits<double>::infinity();
          for (const Slot& s : slots_) {
            if (s.expected_part != part.id) continue;
            const double d = translation_distance(part.pose, s.target_pose);
            if (d < best_d) {
              best_d = d;
              best = &s;
            }
          }
          SnapOutcome outcome = try_snap(part, *best, config_for(part));
          if (std::holds_alternative<Snapped>(outcome)) {
            part.state = PartState::Snapped;
            part.pose = best->target_pose;
          } else {
            part.state = PartState::Free;
          }
          result.snap = std::move(outcome);
        }
        break;
      case EventKind::FlagDefective:
        if (part.state == PartState::Free || part.state == PartState::Grabbed) {
          part.state = PartState::FlaggedDefective;
        } else {
          reject("");
        }
        break;
      case EventKind::EndSession:
        break;
    }
    result.part_state = part.state;
  }

  clock_ms_ = event.timestamp_ms;
  log_.push_back(event);
  results_.push_back(result);
  return result;
}

AssemblySession apply_event(AssemblySession session, const SessionEvent& event) {
  session.apply(event);
  return session;
}

SessionScore grade_session(const AssemblySession& session) {
  if (!session.ended()) fail(SessionErrc::SessionNotEnded, "session has not ended");
  SessionScore score;
  score.total_parts = session.parts().size();
  for (const Part& p : session.parts()) {
    const bool ok = session.conforming(p) ? p.state == PartState::Snapped : p.state == PartState::FlaggedDefective;
    if (ok) ++score.correct_parts;
  }
  score.accuracy = double(score.correct_parts) / double(score.total_parts);
  score.elapsed_ms = session.clock_ms();
  score.par_time_ms = session.par_time_ms();
  score.grade = grade_formula(score.accuracy, score.elapsed_ms, score.par_time_ms, session.weights());
  return score;
}

AssemblySession replay(const Scene& scene, const SnapConfig& config, std::span<const SessionEvent> log) {
  AssemblySession s = create_session(scene, config);
  for (const SessionEvent& e : log) s.apply(e);
  return s;
}

}  // namespace asbuilt
