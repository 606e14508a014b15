#include "gcs/server/script.hpp"

#include "gcs/errors.hpp"
#include "gcs/server/simulation.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gcs {

namespace {

using json_util::Json;
using json_util::Object;

std::string read_text(const std::string &path, const std::string &what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + what + " '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::string resolve(const std::string &base_dir, const std::string &path) {
    if (base_dir.empty() || std::filesystem::path(path).is_absolute()) {
        return path;
    }
    return (std::filesystem::path(base_dir) / path).string();
}

Waypoint parse_waypoint(const Json &j, const std::string &where) {
    const Object o(j, where);
    Waypoint w;
    o.require("lat", w.position.latitude_deg);
    o.require("lon", w.position.longitude_deg);
    o.require("alt_rel", w.position.altitude_m);
    o.read("heading_deg", w.heading_deg);
    o.read("camera_pitch_deg", w.camera_pitch_deg);
    o.read("camera", w.is_camera_waypoint);
    o.finish();
    return w;
}

std::vector<Waypoint> parse_waypoints(const Json &j) {
    std::vector<Waypoint> out;
    for (const auto &w : json_util::array_of(j, "waypoints")) {
        out.push_back(parse_waypoint(w, "waypoints[" + std::to_string(out.size()) + "]"));
    }
    return out;
}

template <typename E, std::size_t N>
E enum_by_name(const std::string &name, const std::array<std::pair<const char *, E>, N> &table,
               const std::string &where) {
    for (const auto &[key, value] : table) {
        if (name == key) {
            return value;
        }
    }
    throw ValidationError(where + ": unknown value '" + name + "'");
}

protocol::Message parse_message(const Json &j, const std::string &base_dir) {
    const Object o(j, "msg");
    std::string type;
    o.require("type", type);
    protocol::Message msg;
    if (type == "control_input") {
        protocol::ControlInput m;
        std::string frame = "drone_centric";
        o.read("frame", frame);
        m.frame = enum_by_name(frame,
                               std::array<std::pair<const char *, ControlFrame>, 2>{
                                   {{"drone_centric", ControlFrame::DroneCentric},
                                    {"user_centric", ControlFrame::UserCentric}}},
                               "control_input.frame");
        if (const auto *ball = o.find("ball")) {
            const auto &a = json_util::array_of(*ball, "control_input.ball");
            if (a.size() != 3 || !std::all_of(a.begin(), a.end(), [](const Json &x) { return x.is_number(); })) {
                throw ValidationError("control_input.ball: expected three numbers");
            }
            m.ball_x = a[0].get<float>();
            m.ball_y = a[1].get<float>();
            m.ball_z = a[2].get<float>();
        }
        o.read("arc_yaw", m.arc_yaw);
        o.read("arc_pitch", m.arc_pitch);
        msg = m;
    } else if (type == "waypoint_upload") {
        protocol::WaypointUpload m;
        std::vector<Waypoint> wps;
        if (const auto *file = o.find("plan_file")) {
            wps = load_plan_file(resolve(base_dir, json_util::string_of(*file, "plan_file"))).waypoints;
        } else if (const auto *inline_wps = o.find("waypoints")) {
            wps = parse_waypoints(*inline_wps);
        } else {
            throw ValidationError("waypoint_upload: needs waypoints or plan_file");
        }
        for (const auto &w : wps) {
            m.waypoints.push_back(protocol::to_wire(w));
        }
        msg = m;
    } else if (type == "mission_command") {
        std::string action;
        o.require("action", action);
        msg = protocol::MissionCommand{enum_by_name(action,
                                                    std::array<std::pair<const char *, MissionAction>, 4>{
                                                        {{"start", MissionAction::Start},
                                                         {"pause", MissionAction::Pause},
                                                         {"resume", MissionAction::Resume},
                                                         {"abort", MissionAction::Abort}}},
                                                    "mission_command.action")};
    } else if (type == "vehicle_command") {
        std::string action;
        o.require("action", action);
        using protocol::VehicleAction;
        msg = protocol::VehicleCommand{enum_by_name(action,
                                                    std::array<std::pair<const char *, VehicleAction>, 4>{
                                                        {{"takeoff", VehicleAction::Takeoff},
                                                         {"land", VehicleAction::Land},
                                                         {"return_home", VehicleAction::ReturnHome},
                                                         {"emergency_stop", VehicleAction::EmergencyStop}}},
                                                    "vehicle_command.action")};
    } else if (type == "safety_override") {
        protocol::SafetyOverride m;
        o.require("active", m.active);
        msg = m;
    } else if (type == "user_pose") {
        protocol::UserPoseMsg m;
        o.require("lat", m.lat);
        o.require("lon", m.lon);
        o.read("alt", m.alt);
        o.read("heading", m.heading);
        msg = m;
    } else {
        throw ValidationError("msg: unknown type '" + type + "'");
    }
    o.finish();
    return msg;
}

protocol::Bytes parse_hex(const std::string &hex) {
    if (hex.size() % 2 != 0) {
        throw ValidationError("hex: odd number of digits");
    }
    protocol::Bytes out;
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        unsigned v = 0;
        const auto [ptr, ec] = std::from_chars(hex.data() + i, hex.data() + i + 2, v, 16);
        if (ec != std::errc{} || ptr != hex.data() + i + 2) {
            throw ValidationError("hex: bad digit pair '" + hex.substr(i, 2) + "'");
        }
        out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

} // namespace

Script parse_script(std::string_view json_text, const std::string &base_dir) {
    const auto doc = json_util::parse(json_text, "script");
    const Object root(doc, "script");
    Script script;
    root.require("duration_s", script.duration_s);
    if (!(script.duration_s >= 0.0) || !std::isfinite(script.duration_s)) {
        throw ValidationError("script.duration_s must be non-negative");
    }
    if (const auto *events = root.find("events")) {
        for (const auto &e : json_util::array_of(*events, "script.events")) {
            const Object eo(e, "script.events[" + std::to_string(script.events.size()) + "]");
            double t = 0.0;
            eo.require("t", t);
            if (!(t >= 0.0) || !std::isfinite(t)) {
                throw ValidationError("script event time must be non-negative");
            }
            ScriptEvent ev;
            ev.time_us = std::llround(t * 1e6);
            if (!script.events.empty() && ev.time_us < script.events.back().time_us) {
                throw ValidationError("script event times must be non-decreasing");
            }
            const auto *msg = eo.find("msg");
            const auto *hex = eo.find("hex");
            if ((msg == nullptr) == (hex == nullptr)) {
                throw ValidationError("script event needs exactly one of msg or hex");
            }
            if (msg != nullptr) {
                try {
                    ev.frame = protocol::encode(parse_message(*msg, base_dir));
                } catch (const protocol::EncodeError &err) {
                    throw ValidationError(std::string("script event: ") + err.what());
                }
            } else {
                ev.frame = parse_hex(json_util::string_of(*hex, "hex"));
            }
            eo.finish();
            script.events.push_back(std::move(ev));
        }
    }
    root.finish();
    return script;
}

Script load_script_file(const std::string &path) {
    return parse_script(read_text(path, "script"), std::filesystem::path(path).parent_path().string());
}

PlanFile parse_plan(std::string_view json_text) {
    const auto doc = json_util::parse(json_text, "plan");
    const Object root(doc, "plan");
    PlanFile plan;
    root.read("speed_mps", plan.speed_mps);
    if (const auto *takeoff = root.find("takeoff")) {
        const Object t(*takeoff, "plan.takeoff");
        TakeoffDatum datum;
        t.require("lat", datum.takeoff_position.latitude_deg);
        t.require("lon", datum.takeoff_position.longitude_deg);
        t.require("terrain_height_m", datum.terrain_height_m);
        t.finish();
        datum.takeoff_position.altitude_m = datum.terrain_height_m;
        plan.takeoff = datum;
    }
    const auto *wps = root.find("waypoints");
    if (wps == nullptr) {
        throw ValidationError("plan: missing waypoints");
    }
    plan.waypoints = parse_waypoints(*wps);
    root.finish();
    if (!(plan.speed_mps > 0.0)) {
        throw ValidationError("plan.speed_mps must be positive");
    }
    return plan;
}

PlanFile load_plan_file(const std::string &path) { return parse_plan(read_text(path, "plan")); }

MissionPlan plan_for_log(const PlanFile &plan, const FlightLog &log) {
    MissionPlan out;
    out.waypoints = plan.waypoints;
    out.speed_mps = plan.speed_mps;
    if (plan.takeoff) {
        out.takeoff_datum = *plan.takeoff;
    } else {
        if (log.empty()) {
            throw ValidationError("plan has no takeoff and the log is empty");
        }
        const LogRecord &first = log.front();
        out.takeoff_datum.terrain_height_m = first.position.altitude_m - first.alt_rel_m;
        out.takeoff_datum.takeoff_position = first.position;
        out.takeoff_datum.takeoff_position.altitude_m = out.takeoff_datum.terrain_height_m;
    }
    return out;
}

ScoreConfig parse_score_config(std::string_view json_text) {
    const auto doc = json_util::parse(json_text, "score config");
    const Object root(doc, "score config");
    ScoreConfig config;
    root.read("delta_m", config.delta_m);
    root.read("d_max_m", config.d_max_m);
    root.finish();
    config.validate();
    return config;
}

ScoreConfig load_score_config_file(const std::string &path) {
    return parse_score_config(read_text(path, "score config"));
}

ScriptResult run_script(const Scenario &scenario, const HeightField &terrain, const Script &script) {
    Simulation sim(scenario, terrain);
    ScriptResult result;
    const auto end_us = std::llround(script.duration_s * 1e6);
    std::size_t next_event = 0;
    while (sim.time_us() < end_us) {
        while (next_event < script.events.size() && script.events[next_event].time_us <= sim.time_us()) {
            const auto &frame = script.events[next_event].frame;
            const auto decoded = protocol::decode(frame);
            protocol::Ack ack;
            if (const auto *msg = std::get_if<protocol::Message>(&decoded)) {
                ack = sim.handle(*msg);
            } else {
                ack = protocol::decode_failure_ack(frame, std::get<protocol::DecodeError>(decoded));
            }
            result.acks.push_back({sim.time_us(), ack});
            ++next_event;
        }
        auto out = sim.tick();
        if (out.telemetry) {
            ++result.telemetry_frames;
        }
        if (out.record) {
            result.log.push_back(*out.record);
        }
    }
    result.final_vehicle = sim.vehicle();
    result.final_mission = sim.mission();
    return result;
}

} // namespace gcs
