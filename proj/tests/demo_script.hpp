#pragma once

#include "asbuilt/json_io.hpp"

namespace asbuilt::testing {

/// Grab the conforming demo part, carry it onto its slot and let go.
inline Json conforming_batch(std::uint64_t seq = 1) {
  Json j = Json::object();
  j["seq"] = seq;
  j["events"] = Json::parse(R"([
    {"timestamp_ms": 1000, "kind": "Grab", "part_id": "flange"},
    {"timestamp_ms": 3000, "kind": "Move", "part_id": "flange",
     "pose": {"translation": [3.0, -2.0, 1.0], "rotation": [0.9993908270190958, 0, 0, 0.03489949670250097]}},
    {"timestamp_ms": 3500, "kind": "Release", "part_id": "flange"}
  ])");
  return j;
}

/// Reject the bracket and finish at par time.
inline Json finishing_batch(std::uint64_t seq = 2) {
  Json j = Json::object();
  j["seq"] = seq;
  j["events"] = Json::parse(R"([
    {"timestamp_ms": 5000, "kind": "Grab", "part_id": "bracket"},
    {"timestamp_ms": 6000, "kind": "FlagDefective", "part_id": "bracket"},
    {"timestamp_ms": 20000, "kind": "EndSession"}
  ])");
  return j;
}

}  // namespace asbuilt::testing
