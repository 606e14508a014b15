// Scenario files: the terrain, people and parameters a simulation runs with.
//
// A scenario is a JSON object. Every key is optional except
// "vehicle_start"; unknown keys are rejected.
//
//   {
//     "terrain": {"file": "field.asc"}                      (relative to the scenario)
//              | {"synthetic": {"width_m": 100, "depth_m": 250, "slope_m": 95,
//                               "base_m": 215, "cell_size_m": 1,
//                               "origin": {"lat": 51.03, "lon": 13.73}}},
//     "user": {"lat": .., "lon": .., "heading_deg": ..},     (default: vehicle start)
//     "vehicle_start": {"lat": .., "lon": .., "yaw_deg": 0},
//     "vehicle": {"max_h_speed": 10, "max_v_speed": 4, "max_yaw_rate": 90,
//                 "response_tau_s": 0.5, "takeoff_alt_rel_m": 1.2,
//                 "battery_capacity_s": 1200, "gimbal_rate": 60},
//     "control": {"deadzone": 0.1, "yaw_rate_gain": 90, "pitch_gain": 90,
//                 "speed_exponent": 1},
//     "score": {"delta_m": 10, "d_max_m": 50},
//     "mission": {"speed_mps": 5, "clearance_m": 5, "arrival_radius_m": 2},
//     "gps": {"default_level": 5, "windows": [{"start_s": 30, "end_s": 40, "level": 2}]},
//     "listen": "127.0.0.1:8765",
//     "tick_hz": 50
//   }
#pragma once

#include "gcs/control.hpp"
#include "gcs/flight_log.hpp"
#include "gcs/mission.hpp"
#include "gcs/terrain.hpp"
#include "gcs/vehicle.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace gcs {

struct Scenario {
    std::optional<std::string> terrain_file;  ///< absolute, or relative to the working directory
    SyntheticFieldSpec synthetic;              ///< used when terrain_file is empty
    std::optional<UserPose> user;              ///< altitude is replaced by the ground height
    double start_lat_deg = 0.0;
    double start_lon_deg = 0.0;
    double start_yaw_deg = 0.0;
    VehicleParams vehicle;
    ControlParams control;
    ScoreConfig score;
    double mission_speed_mps = 5.0;
    double clearance_m = 5.0;
    ExecutorParams executor;
    GpsScenario gps;
    std::string listen = "127.0.0.1:8765";
    double tick_hz = 50.0;

    double dt_s() const { return 1.0 / tick_hz; }
};

/// Parses scenario JSON text. Relative terrain paths are resolved against
/// `base_dir`. Throws ValidationError for unknown keys or bad values.
Scenario parse_scenario(std::string_view json_text, const std::string &base_dir = "");
Scenario load_scenario_file(const std::string &path);

HeightField build_terrain(const Scenario &scenario);

/// Checks parameter ranges and that the vehicle starts on the terrain.
void validate_scenario(const Scenario &scenario, const HeightField &terrain);

/// Splits "host:port". Throws ValidationError when malformed.
std::pair<std::string, unsigned short> parse_listen_address(const std::string &address);

} // namespace gcs
