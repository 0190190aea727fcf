#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "asbuilt/assembly.hpp"
#include "asbuilt/discrepancy.hpp"
#include "asbuilt/mesh.hpp"
#include "asbuilt/metrics.hpp"

namespace asbuilt {

// Key order is part of the output format; everything here uses ordered_json.
using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat record with the seven parameter keys, in parameter order.
Json metrics_to_json(const MacroMetrics& m);
/// Throws FormatError when a key is missing or not a finite number.
MacroMetrics metrics_from_json(const Json& j);

/// Flat record: threshold, overall_pass, max_difference, worst_parameter, then
/// <key>_bim / <key>_scanned / <key>_diff / <key>_pass for each parameter.
Json comparison_to_json(const ComparisonReport& r);

Json validation_to_json(const ValidationReport& r);

/// {"translation": [x,y,z], "rotation": [w,x,y,z]}
Json pose_to_json(const Pose& p);
/// Rotation defaults to identity; a quaternion that is not unit within 1e-9
/// is normalized. Throws FormatError.
Pose pose_from_json(const Json& j);

Json snap_config_to_json(const SnapConfig& c);
SnapConfig snap_config_from_json(const Json& j);

Json event_to_json(const SessionEvent& e);
SessionEvent event_from_json(const Json& j);

/// One JSON object per line (see docs/protocol.md).
std::string event_to_line(const SessionEvent& e);
SessionEvent event_from_line(std::string_view line);
/// Blank lines are skipped. Throws FormatError naming the bad line.
std::vector<SessionEvent> read_event_log(std::istream& in);
void write_event_log(std::ostream& out, const std::vector<SessionEvent>& events);

Json snap_outcome_to_json(const SnapOutcome& o);
Json event_result_to_json(const EventResult& r);
Json part_state_to_json(const Part& p);
Json score_to_json(const SessionScore& s);

/// Final states, per-part comparisons, and the score once the session ended.
Json session_report(const AssemblySession& session);

/// Serializes with a fixed layout (2-space indent, trailing newline).
std::string dump(const Json& j);

}  // namespace asbuilt
