#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "asbuilt/discrepancy.hpp"
#include "asbuilt/metrics.hpp"
#include "asbuilt/pose.hpp"

namespace asbuilt {

enum class SessionErrc {
  InvalidScene,
  InvalidConfig,
  InvalidEvent,
  OutOfOrderEvent,
  UnknownPart,
  SessionEnded,
  SessionNotEnded,
};

const char* to_string(SessionErrc code);

class SessionError : public std::runtime_error {
 public:
  SessionError(SessionErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  SessionErrc code() const noexcept { return code_; }

 private:
  SessionErrc code_;
};

inline constexpr double kDefaultSnapRadiusFraction = 0.15;  // of the slot part's bounding-box diagonal
inline constexpr double kDefaultMaxAngleDeg = 30.0;

struct SnapConfig {
  /// Unset: 0.15 x the bounding-box diagonal of the slot's BIM part.
  std::optional<double> snap_radius_mm;
  double max_angle_deg = kDefaultMaxAngleDeg;
  double threshold = kDefaultThreshold;
};

/// Throws SessionError(InvalidConfig).
void validate(const SnapConfig& config);

struct GradingWeights {
  double accuracy = 0.7;
  double speed = 0.3;
};

void validate(const GradingWeights& weights);

struct PartSpec {
  std::string id;
  MacroMetrics metrics;
  Pose initial_pose;
  std::optional<double> threshold;  // per-part override of SnapConfig::threshold
};

struct SlotSpec {
  std::string id;
  std::string expected_part;
  Pose target_pose;
  MacroMetrics bim_metrics;
};

/// Scene with metrics already resolved for every part and slot.
struct Scene {
  std::string id;
  std::vector<PartSpec> parts;
  std::vector<SlotSpec> slots;
  std::int64_t par_time_ms = 60000;
  GradingWeights weights;
};

enum class PartState { Free, Grabbed, Snapped, FlaggedDefective };

const char* to_string(PartState state);

struct Part {
  std::string id;
  MacroMetrics metrics;
  Pose pose;
  PartState state = PartState::Free;
  std::optional<double> threshold;
};

struct Slot {
  std::string id;
  Pose target_pose;
  MacroMetrics bim_metrics;
  std::string expected_part;
};

enum class EventKind { Grab, Move, Release, FlagDefective, EndSession };

const char* to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

struct SessionEvent {
  std::int64_t timestamp_ms = 0;  // since session start
  EventKind kind = EventKind::EndSession;
  std::string part_id;       // empty for EndSession
  std::optional<Pose> pose;  // Move only

  friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

struct Snapped {
  std::string slot_id;
};
struct RejectedQuality {
  std::string slot_id;
  ComparisonReport report;
};
struct OutOfRange {
  std::string slot_id;
  double distance_mm = 0.0;
  double angle_deg = 0.0;
};
using SnapOutcome = std::variant<Snapped, RejectedQuality, OutOfRange>;

const char* outcome_name(const SnapOutcome& outcome);

double effective_snap_radius(const Slot& slot, const SnapConfig& config);

/// Quality is checked first: a failing part is RejectedQuality even when it
/// is also out of range.
SnapOutcome try_snap(const Part& part, const Slot& slot, const SnapConfig& config);

/// What one applied event did. Invalid transitions (e.g. Move on a part that
/// is not grabbed) leave state unchanged and carry a warning.
struct EventResult {
  std::size_t index = 0;  // position in the session log
  SessionEvent event;
  std::optional<SnapOutcome> snap;
  std::optional<std::string> warning;
  std::optional<PartState> part_state;  // after the event; unset for EndSession
};

struct SessionScore {
  double accuracy = 0.0;
  std::int64_t elapsed_ms = 0;
  std::int64_t par_time_ms = 0;
  double grade = 0.0;
  std::size_t correct_parts = 0;
  std::size_t total_parts = 0;
};

/// 100 * (w_acc * accuracy + w_speed * min(1, par / elapsed)); elapsed 0 counts as on time.
double grade_formula(double accuracy, std::int64_t elapsed_ms, std::int64_t par_time_ms,
                     const GradingWeights& weights = {});

/// Event-sourced assembly session. Single writer: callers serialize apply().
class AssemblySession {
 public:
  /// Throws SessionError(InvalidScene / InvalidConfig).
  static AssemblySession create(const Scene& scene, const SnapConfig& config);

  /// Throws SessionError(OutOfOrderEvent / UnknownPart / SessionEnded /
  /// InvalidEvent); on throw the session is unchanged.
  EventResult apply(const SessionEvent& event);

  const std::string& scene_id() const { return scene_id_; }
  const std::vector<Part>& parts() const { return parts_; }
  const std::vector<Slot>& slots() const { return slots_; }
  const std::vector<SessionEvent>& log() const { return log_; }
  const std::vector<EventResult>& results() const { return results_; }
  const SnapConfig& config() const { return config_; }
  std::int64_t clock_ms() const { return clock_ms_; }
  std::int64_t par_time_ms() const { return par_time_ms_; }
  const GradingWeights& weights() const { return weights_; }
  bool ended() const { return ended_; }

  const Part* find_part(std::string_view id) const;
  /// The slot that expects the given part.
  const Slot& slot_for(const Part& part) const;
  /// SnapConfig with the part's threshold override applied.
  SnapConfig config_for(const Part& part) const;
  /// Comparison of the part against the slot it belongs to.
  ComparisonReport part_report(const Part& part) const;
  bool conforming(const Part& part) const { return part_report(part).overall_pass; }

 private:
  AssemblySession() = default;

  std::string scene_id_;
  std::vector<Part> parts_;
  std::vector<Slot> slots_;
  SnapConfig config_;
  std::int64_t par_time_ms_ = 0;
  GradingWeights weights_;
  std::vector<SessionEvent> log_;
  std::vector<EventResult> results_;
  std::int64_t clock_ms_ = 0;
  bool ended_ = false;
};

inline AssemblySession create_session(const Scene& scene, const SnapConfig& config) {
  return AssemblySession::create(scene, config);
}

/// Value-returning form of AssemblySession::apply.
AssemblySession apply_event(AssemblySession session, const SessionEvent& event);

/// Throws SessionError(SessionNotEnded).
SessionScore grade_session(const AssemblySession& session);

/// create_session folded with apply over the log.
AssemblySession replay(const Scene& scene, const SnapConfig& config, std::span<const SessionEvent> log);

}  // namespace asbuilt
