#include "gcs/server/scenario.hpp"

#include "gcs/errors.hpp"
#include "json_util.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gcs {

namespace {

void read_vehicle(const json_util::Object &o, VehicleParams &p) {
    o.read("max_h_speed", p.max_h_speed);
    o.read("max_v_speed", p.max_v_speed);
    o.read("max_yaw_rate", p.max_yaw_rate);
    o.read("response_tau_s", p.response_tau_s);
    o.read("takeoff_alt_rel_m", p.takeoff_alt_rel_m);
    o.read("battery_capacity_s", p.battery_capacity_s);
    o.read("gimbal_rate", p.gimbal_rate);
    o.finish();
}

void read_control(const json_util::Object &o, ControlParams &p) {
    o.read("deadzone", p.deadzone);
    o.read("yaw_rate_gain", p.yaw_rate_gain);
    o.read("pitch_gain", p.pitch_gain);
    o.read("speed_exponent", p.speed_exponent);
    o.finish();
}

void read_gps(const json_util::Object &o, GpsScenario &gps) {
    o.read("default_level", gps.default_level);
    if (const auto *windows = o.find("windows")) {
        for (const auto &w : json_util::array_of(*windows, "gps.windows")) {
            const json_util::Object wo(w, "gps.windows[]");
            GpsScenario::Window win;
            wo.require("start_s", win.start_s);
            wo.require("end_s", win.end_s);
            wo.require("level", win.level);
            wo.finish();
            if (win.level < 0 || win.level > 5 || !(win.end_s >= win.start_s)) {
                throw ValidationError("gps window: level must be in [0, 5] and end_s >= start_s");
            }
            gps.windows.push_back(win);
        }
    }
    o.finish();
    if (gps.default_level < 0 || gps.default_level > 5) {
        throw ValidationError("gps.default_level must be in [0, 5]");
    }
}

} // namespace

Scenario parse_scenario(std::string_view json_text, const std::string &base_dir) {
    const auto doc = json_util::parse(json_text, "scenario");
    const json_util::Object root(doc, "scenario");
    Scenario sc;

    if (const auto *terrain = root.find("terrain")) {
        const json_util::Object t(*terrain, "terrain");
        if (const auto *file = t.find("file")) {
            std::string path = json_util::string_of(*file, "terrain.file");
            if (!base_dir.empty() && std::filesystem::path(path).is_relative()) {
                path = (std::filesystem::path(base_dir) / path).string();
            }
            sc.terrain_file = path;
        }
        if (const auto *syn = t.find("synthetic")) {
            if (sc.terrain_file) {
                throw ValidationError("terrain: give either file or synthetic, not both");
            }
            const json_util::Object s(*syn, "terrain.synthetic");
            s.read("width_m", sc.synthetic.width_m);
            s.read("depth_m", sc.synthetic.depth_m);
            s.read("slope_m", sc.synthetic.slope_m);
            s.read("base_m", sc.synthetic.base_m);
            s.read("cell_size_m", sc.synthetic.cell_size_m);
            if (const auto *origin = s.find("origin")) {
                const json_util::Object og(*origin, "terrain.synthetic.origin");
                og.require("lat", sc.synthetic.southwest_origin.latitude_deg);
                og.require("lon", sc.synthetic.southwest_origin.longitude_deg);
                og.finish();
            }
            s.finish();
        }
        t.finish();
    }

    {
        const auto *start = root.find("vehicle_start");
        if (start == nullptr) {
            throw ValidationError("scenario: missing vehicle_start");
        }
        const json_util::Object s(*start, "vehicle_start");
        s.require("lat", sc.start_lat_deg);
        s.require("lon", sc.start_lon_deg);
        s.read("yaw_deg", sc.start_yaw_deg);
        s.finish();
    }
    if (const auto *user = root.find("user")) {
        const json_util::Object u(*user, "user");
        UserPose pose;
        u.require("lat", pose.position.latitude_deg);
        u.require("lon", pose.position.longitude_deg);
        u.read("heading_deg", pose.heading_deg);
        u.finish();
        sc.user = pose;
    }
    if (const auto *v = root.find("vehicle")) {
        read_vehicle(json_util::Object(*v, "vehicle"), sc.vehicle);
    }
    if (const auto *c = root.find("control")) {
        read_control(json_util::Object(*c, "control"), sc.control);
    }
    if (const auto *s = root.find("score")) {
        const json_util::Object so(*s, "score");
        so.read("delta_m", sc.score.delta_m);
        so.read("d_max_m", sc.score.d_max_m);
        so.finish();
    }
    if (const auto *m = root.find("mission")) {
        const json_util::Object mo(*m, "mission");
        mo.read("speed_mps", sc.mission_speed_mps);
        mo.read("clearance_m", sc.clearance_m);
        mo.read("arrival_radius_m", sc.executor.arrival_radius_m);
        mo.finish();
    }
    if (const auto *g = root.find("gps")) {
        read_gps(json_util::Object(*g, "gps"), sc.gps);
    }
    root.read("listen", sc.listen);
    root.read("tick_hz", sc.tick_hz);
    root.finish();

    sc.vehicle.validate();
    sc.control.validate();
    sc.score.validate();
    if (!(sc.tick_hz >= 10.0) || !(sc.tick_hz <= 1000.0)) {
        throw ValidationError("tick_hz must be in [10, 1000]");
    }
    if (!(sc.mission_speed_mps > 0.0) || !(sc.clearance_m >= 0.0) || !(sc.executor.arrival_radius_m > 0.0)) {
        throw ValidationError("mission: speed and arrival radius must be positive, clearance non-negative");
    }
    parse_listen_address(sc.listen);
    return sc;
}

Scenario load_scenario_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open scenario '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str(), std::filesystem::path(path).parent_path().string());
}

HeightField build_terrain(const Scenario &scenario) {
    if (scenario.terrain_file) {
        return load_ascii_grid_file(*scenario.terrain_file);
    }
    return synthetic_field(scenario.synthetic);
}

void validate_scenario(const Scenario &scenario, const HeightField &terrain) {
    const GeodeticPosition start{scenario.start_lat_deg, scenario.start_lon_deg, 0.0};
    if (!is_valid(start) || !terrain.try_height_at(start)) {
        throw ValidationError("vehicle_start lies outside the terrain");
    }
    if (scenario.user && !is_valid(scenario.user->position)) {
        throw ValidationError("user position is not a valid coordinate");
    }
}

std::pair<std::string, unsigned short> parse_listen_address(const std::string &address) {
    const auto colon = address.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
        throw ValidationError("listen address must look like host:port, got '" + address + "'");
    }
    unsigned port = 0;
    const char *first = address.data() + colon + 1;
    const char *last = address.data() + address.size();
    const auto [ptr, ec] = std::from_chars(first, last, port);
    if (ec != std::errc{} || ptr != last || port > 65535) {
        throw ValidationError("listen address has a bad port: '" + address + "'");
    }
    return {address.substr(0, colon), static_cast<unsigned short>(port)};
}

} // namespace gcs
