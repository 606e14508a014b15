// Scripted pilots for headless runs, plus the plan and score-config files.
//
// Script:
//   {
//     "duration_s": 120,
//     "events": [
//       {"t": 0.0, "msg": {"type": "vehicle_command", "action": "takeoff"}},
//       {"t": 5.0, "msg": {"type": "waypoint_upload", "plan_file": "task_a.plan.json"}},
//       {"t": 5.5, "msg": {"type": "mission_command", "action": "start"}},
//       {"t": 9.0, "hex": "0403"}
//     ]
//   }
//
// Message objects by "type":
//   control_input    frame ("drone_centric" | "user_centric"), ball [x, y, z],
//                    arc_yaw, arc_pitch
//   waypoint_upload  waypoints [...] or plan_file
//   mission_command  action ("start" | "pause" | "resume" | "abort")
//   vehicle_command  action ("takeoff" | "land" | "return_home" | "emergency_stop")
//   safety_override  active
//   user_pose        lat, lon, alt, heading
// "hex" injects raw bytes, which need not decode.
//
// Plan file:
//   {
//     "speed_mps": 5,
//     "takeoff": {"lat": .., "lon": .., "terrain_height_m": ..},   (optional)
//     "waypoints": [{"lat": .., "lon": .., "alt_rel": 40, "heading_deg": 90,
//                    "camera_pitch_deg": -30, "camera": false}, ...]
//   }
//
// Score config file: {"delta_m": 10, "d_max_m": 50}
#pragma once

#include "gcs/flight_log.hpp"
#include "gcs/mission.hpp"
#include "gcs/protocol.hpp"
#include "gcs/server/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gcs {

struct ScriptEvent {
    std::int64_t time_us = 0;
    protocol::Bytes frame;  ///< encoded message, or raw bytes from "hex"
};

struct Script {
    double duration_s = 0.0;
    std::vector<ScriptEvent> events;  ///< non-decreasing times
};

Script parse_script(std::string_view json_text, const std::string &base_dir = "");
Script load_script_file(const std::string &path);

struct PlanFile {
    std::vector<Waypoint> waypoints;
    double speed_mps = 5.0;
    std::optional<TakeoffDatum> takeoff;
};

PlanFile parse_plan(std::string_view json_text);
PlanFile load_plan_file(const std::string &path);

/// The plan a log is scored against. Without an explicit takeoff the datum
/// is recovered from the first record: alt_wgs84 - alt_rel.
MissionPlan plan_for_log(const PlanFile &plan, const FlightLog &log);

ScoreConfig parse_score_config(std::string_view json_text);
ScoreConfig load_score_config_file(const std::string &path);

struct ScriptAck {
    std::int64_t time_us = 0;
    protocol::Ack ack;
};

struct ScriptResult {
    FlightLog log;
    std::vector<ScriptAck> acks;
    std::uint32_t telemetry_frames = 0;
    VehicleState final_vehicle;
    MissionStatus final_mission;
};

/// Runs the scenario headless for script.duration_s, injecting every event
/// at the first tick whose time is at or after it. Illegal messages are
/// answered with an error Ack and the run continues. Deterministic.
ScriptResult run_script(const Scenario &scenario, const HeightField &terrain, const Script &script);

} // namespace gcs
