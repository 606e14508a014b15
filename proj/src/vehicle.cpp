#include "gcs/vehicle.hpp"

#include "gcs/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace gcs {

namespace {

constexpr double kMinTakeoffBatteryPct = 10.0;
constexpr double kTakeoffGain = 0.8;       // 1/s, climb set-point per metre of error
constexpr double kTakeoffDoneAltM = 0.01;
constexpr double kTakeoffDoneSpeed = 0.02;
constexpr double kHomeArrivalM = 0.3;
constexpr double kHomeArrivalSpeed = 0.1;
constexpr double kLandingGain = 0.8;       // 1/s
constexpr double kLandingMinSpeed = 0.3;
constexpr double kTouchdownM = 0.02;
constexpr double kVelocitySnap = 1e-9;

constexpr std::array<std::string_view, kFlightPhaseCount> kPhaseNames = {
    "Grounded", "TakingOff", "Hovering", "Manual", "Mission", "ReturningHome", "Landing", "EmergencyStopped",
    "Crashed"};

EnuVector clamp_velocity(EnuVector v, const VehicleParams &p) {
    const double h = v.horizontal_norm();
    if (h > p.max_h_speed) {
        const double s = p.max_h_speed / h;
        v.east_m *= s;
        v.north_m *= s;
    }
    v.up_m = std::clamp(v.up_m, -p.max_v_speed, p.max_v_speed);
    return v;
}

double snap(double v, double cmd) { return (cmd == 0.0 && std::abs(v) < kVelocitySnap) ? 0.0 : v; }

} // namespace

std::string_view to_string(FlightPhase phase) { return kPhaseNames.at(static_cast<std::size_t>(phase)); }

std::optional<FlightPhase> flight_phase_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
        if (kPhaseNames[i] == name) {
            return static_cast<FlightPhase>(i);
        }
    }
    return std::nullopt;
}

bool is_airborne(FlightPhase phase) {
    switch (phase) {
    case FlightPhase::TakingOff:
    case FlightPhase::Hovering:
    case FlightPhase::Manual:
    case FlightPhase::Mission:
    case FlightPhase::ReturningHome:
    case FlightPhase::Landing:
    case FlightPhase::EmergencyStopped:
        return true;
    case FlightPhase::Grounded:
    case FlightPhase::Crashed:
        return false;
    }
    return false;
}

bool is_allowed_transition(FlightPhase from, FlightPhase to) {
    using P = FlightPhase;
    if (from == to) {
        return true;
    }
    auto any_of = [to](std::initializer_list<P> allowed) {
        return std::find(allowed.begin(), allowed.end(), to) != allowed.end();
    };
    switch (from) {
    case P::Grounded:
        return any_of({P::TakingOff, P::EmergencyStopped});
    case P::TakingOff:
        return any_of({P::Hovering, P::Landing, P::EmergencyStopped});
    case P::Hovering:
        return any_of({P::Manual, P::Mission, P::ReturningHome, P::Landing, P::EmergencyStopped, P::Crashed});
    case P::Manual:
        return any_of({P::Hovering, P::Mission, P::ReturningHome, P::Landing, P::EmergencyStopped, P::Crashed});
    case P::Mission:
        return any_of({P::Hovering, P::ReturningHome, P::Landing, P::EmergencyStopped, P::Crashed});
    case P::ReturningHome:
        return any_of({P::Landing, P::EmergencyStopped, P::Crashed});
    case P::Landing:
        return any_of({P::Grounded, P::EmergencyStopped});
    case P::EmergencyStopped:
        return any_of({P::Hovering, P::Grounded});
    case P::Crashed:
        return any_of({P::EmergencyStopped});
    }
    return false;
}

void VehicleParams::validate() const {
    const std::array<double, 7> fields = {max_h_speed,       max_v_speed,        max_yaw_rate, response_tau_s,
                                          takeoff_alt_rel_m, battery_capacity_s, gimbal_rate};
    for (double f : fields) {
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw ValidationError("VehicleParams: every parameter must be positive and finite");
        }
    }
}

bool VelocityCommand::is_zero_motion() const {
    return velocity_mps == EnuVector{} && yaw_rate_dps == 0.0;
}

VelocityCommand clamp_command(const VelocityCommand &cmd, const VehicleParams &params) {
    VelocityCommand out = cmd;
    out.velocity_mps = clamp_velocity(cmd.velocity_mps, params);
    out.yaw_rate_dps = std::clamp(cmd.yaw_rate_dps, -params.max_yaw_rate, params.max_yaw_rate);
    if (out.gimbal_pitch_target_deg) {
        out.gimbal_pitch_target_deg = std::clamp(*out.gimbal_pitch_target_deg, kGimbalMinDeg, kGimbalMaxDeg);
    }
    return out;
}

double SimWorld::ground_height(const GeodeticPosition &p, double fallback_m) const {
    return terrain_->try_height_at(p).value_or(fallback_m);
}

VehicleState initial_state(const GeodeticPosition &start, const SimWorld &world, double yaw_deg) {
    VehicleState s;
    s.position = start;
    s.position.altitude_m = world.terrain().height_at(start);
    s.yaw_deg = normalize_heading_deg(yaw_deg);
    s.datum = TakeoffDatum{s.position, s.position.altitude_m};
    s.home = s.position;
    return s;
}

VehicleState step(const VehicleState &state, const VelocityCommand &cmd, double dt, const VehicleParams &params,
                  const SimWorld &world) {
    if (!(dt > 0.0 && dt <= 0.1)) {
        throw ValidationError("step: dt must lie in (0, 0.1] seconds");
    }
    VehicleState next = state;
    next.time_us += std::llround(dt * 1e6);

    const bool airborne = is_airborne(state.phase);
    if (airborne) {
        next.battery_pct = std::max(0.0, state.battery_pct - 100.0 * dt / params.battery_capacity_s);
    }

    if (state.phase == FlightPhase::Grounded || state.phase == FlightPhase::Crashed ||
        state.phase == FlightPhase::EmergencyStopped) {
        next.velocity_mps = {};
        next.yaw_rate_dps = 0.0;
        return next;
    }

    const VelocityCommand c = clamp_command(cmd, params);
    const double alpha = std::min(1.0, dt / params.response_tau_s);
    EnuVector v = state.velocity_mps + (c.velocity_mps - state.velocity_mps) * alpha;
    v = clamp_velocity(v, params);
    v.east_m = snap(v.east_m, c.velocity_mps.east_m);
    v.north_m = snap(v.north_m, c.velocity_mps.north_m);
    v.up_m = snap(v.up_m, c.velocity_mps.up_m);
    next.velocity_mps = v;

    if (v != EnuVector{}) {
        next.position = world.frame().to_geodetic(world.frame().to_enu(state.position) + v * dt);
    }

    next.yaw_rate_dps = c.yaw_rate_dps;
    next.yaw_deg = normalize_heading_deg(state.yaw_deg + c.yaw_rate_dps * dt);

    if (c.gimbal_pitch_target_deg) {
        const double max_step = params.gimbal_rate * dt;
        const double delta = std::clamp(*c.gimbal_pitch_target_deg - state.gimbal_pitch_deg, -max_step, max_step);
        next.gimbal_pitch_deg = std::clamp(state.gimbal_pitch_deg + delta, kGimbalMinDeg, kGimbalMaxDeg);
    }

    const double ground = world.ground_height(next.position, state.datum.terrain_height_m);
    switch (state.phase) {
    case FlightPhase::TakingOff: {
        if (next.position.altitude_m < ground) {
            next.position.altitude_m = ground;
            next.velocity_mps.up_m = std::max(0.0, next.velocity_mps.up_m);
        }
        const double target = state.datum.terrain_height_m + params.takeoff_alt_rel_m;
        if (std::abs(target - next.position.altitude_m) < kTakeoffDoneAltM &&
            std::abs(next.velocity_mps.up_m) < kTakeoffDoneSpeed) {
            next.phase = FlightPhase::Hovering;
        }
        break;
    }
    case FlightPhase::Landing:
        if (next.position.altitude_m <= ground + kTouchdownM) {
            next.position.altitude_m = ground;
            next.velocity_mps = {};
            next.yaw_rate_dps = 0.0;
            next.phase = FlightPhase::Grounded;
        }
        break;
    case FlightPhase::ReturningHome:
        if (next.position.altitude_m < ground) {
            next.position.altitude_m = ground;
            next.velocity_mps = {};
            next.yaw_rate_dps = 0.0;
            next.phase = FlightPhase::Crashed;
            break;
        }
        if (ground_distance(world.frame().to_enu(next.position), world.frame().to_enu(state.home)) < kHomeArrivalM &&
            next.velocity_mps.horizontal_norm() < kHomeArrivalSpeed) {
            next.phase = FlightPhase::Landing;
        }
        break;
    default:
        if (next.position.altitude_m < ground) {
            next.position.altitude_m = ground;
            next.velocity_mps = {};
            next.yaw_rate_dps = 0.0;
            next.phase = FlightPhase::Crashed;
        }
        break;
    }
    return next;
}

VehicleState takeoff(const VehicleState &state, const VehicleParams &params, const SimWorld &world) {
    params.validate();
    if (state.phase == FlightPhase::TakingOff) {
        return state;
    }
    if (state.phase != FlightPhase::Grounded) {
        throw InvalidTransitionError("takeoff: vehicle is not grounded (phase " + std::string(to_string(state.phase)) +
                                     ")");
    }
    if (state.battery_pct <= kMinTakeoffBatteryPct) {
        throw ValidationError("takeoff: battery at or below 10 %");
    }
    VehicleState next = state;
    const double ground = world.ground_height(state.position, state.position.altitude_m);
    next.datum = TakeoffDatum{state.position, ground};
    next.home = state.position;
    next.phase = FlightPhase::TakingOff;
    return next;
}

VehicleState land(const VehicleState &state) {
    if (state.phase == FlightPhase::Landing) {
        return state;
    }
    if (!is_allowed_transition(state.phase, FlightPhase::Landing)) {
        throw InvalidTransitionError("land: not possible from phase " + std::string(to_string(state.phase)));
    }
    VehicleState next = state;
    next.phase = FlightPhase::Landing;
    return next;
}

VehicleState return_home(const VehicleState &state, const GeodeticPosition &home) {
    if (state.phase == FlightPhase::ReturningHome) {
        return state;
    }
    if (!is_allowed_transition(state.phase, FlightPhase::ReturningHome)) {
        throw InvalidTransitionError("return_home: not possible from phase " + std::string(to_string(state.phase)));
    }
    VehicleState next = state;
    next.home = home;
    next.phase = FlightPhase::ReturningHome;
    return next;
}

VehicleState emergency_stop(const VehicleState &state) {
    VehicleState next = state;
    next.phase = FlightPhase::EmergencyStopped;
    next.velocity_mps = {};
    next.yaw_rate_dps = 0.0;
    return next;
}

VehicleState reset_emergency(const VehicleState &state, const SimWorld &world) {
    if (state.phase != FlightPhase::EmergencyStopped) {
        throw InvalidTransitionError("reset_emergency: vehicle is not emergency-stopped");
    }
    VehicleState next = state;
    const double ground = world.ground_height(state.position, state.datum.terrain_height_m);
    next.phase = state.position.altitude_m > ground + kTouchdownM ? FlightPhase::Hovering : FlightPhase::Grounded;
    return next;
}

VelocityCommand autopilot_command(const VehicleState &state, const VehicleParams &params, const SimWorld &world) {
    VelocityCommand cmd;
    switch (state.phase) {
    case FlightPhase::TakingOff: {
        const double target = state.datum.terrain_height_m + params.takeoff_alt_rel_m;
        cmd.velocity_mps.up_m =
            std::clamp(kTakeoffGain * (target - state.position.altitude_m), -params.max_v_speed, params.max_v_speed);
        break;
    }
    case FlightPhase::ReturningHome: {
        const EnuVector here = world.frame().to_enu(state.position);
        const EnuVector home = world.frame().to_enu(state.home);
        const double de = home.east_m - here.east_m;
        const double dn = home.north_m - here.north_m;
        const double dist = std::hypot(de, dn);
        if (dist > 0.0) {
            // 1 / (4 tau) makes the approach critically damped: no overshoot past home.
            const double gain = 0.25 / params.response_tau_s;
            const double speed = std::min(params.max_h_speed, gain * dist);
            cmd.velocity_mps.east_m = de / dist * speed;
            cmd.velocity_mps.north_m = dn / dist * speed;
        }
        break;
    }
    case FlightPhase::Landing: {
        const double ground = world.ground_height(state.position, state.datum.terrain_height_m);
        const double height = std::max(0.0, state.position.altitude_m - ground);
        cmd.velocity_mps.up_m = -std::clamp(kLandingGain * height, kLandingMinSpeed, params.max_v_speed);
        break;
    }
    default:
        break;
    }
    return cmd;
}

int gps_level_model(const VehicleState &state, const GpsScenario &scenario) {
    int level = scenario.default_level;
    const double t = state.time_s();
    for (const auto &w : scenario.windows) {
        if (t >= w.start_s && t < w.end_s) {
            level = w.level;
        }
    }
    return std::clamp(level, 0, 5);
}

} // namespace gcs
