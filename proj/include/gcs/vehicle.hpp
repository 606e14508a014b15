// Fixed-step kinematic quadrotor: first-order velocity response, limits,
// battery and GPS telemetry, and the autonomous takeoff / landing /
// return-home / emergency-stop behaviours.
#pragma once

#include "gcs/geodesy.hpp"
#include "gcs/terrain.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace gcs {

enum class FlightPhase : std::uint8_t {
    Grounded = 0,
    TakingOff = 1,
    Hovering = 2,
    Manual = 3,
    Mission = 4,
    ReturningHome = 5,
    Landing = 6,
    EmergencyStopped = 7,
    Crashed = 8,
};

inline constexpr int kFlightPhaseCount = 9;

std::string_view to_string(FlightPhase phase);
std::optional<FlightPhase> flight_phase_from_string(std::string_view name);

/// Phases in which the vehicle is off the ground and drawing hover power.
bool is_airborne(FlightPhase phase);

/// The documented phase machine. Self-transitions are always allowed.
///
///   Grounded         -> TakingOff, EmergencyStopped
///   TakingOff        -> Hovering, Landing, EmergencyStopped
///   Hovering         -> Manual, Mission, ReturningHome, Landing, EmergencyStopped, Crashed
///   Manual           -> Hovering, Mission, ReturningHome, Landing, EmergencyStopped, Crashed
///   Mission          -> Hovering, ReturningHome, Landing, EmergencyStopped, Crashed
///   ReturningHome    -> Landing, EmergencyStopped, Crashed
///   Landing          -> Grounded, EmergencyStopped
///   EmergencyStopped -> Hovering, Grounded (explicit reset only)
///   Crashed          -> EmergencyStopped
bool is_allowed_transition(FlightPhase from, FlightPhase to);

struct VehicleParams {
    double max_h_speed = 10.0;       ///< m/s
    double max_v_speed = 4.0;        ///< m/s
    double max_yaw_rate = 90.0;      ///< deg/s
    double response_tau_s = 0.5;     ///< first-order velocity time constant
    double takeoff_alt_rel_m = 1.2;  ///< hover height after takeoff
    double battery_capacity_s = 1200.0;
    double gimbal_rate = 60.0;       ///< deg/s

    /// Throws ValidationError unless every field is positive and finite.
    void validate() const;
};

inline constexpr double kGimbalMinDeg = -90.0;
inline constexpr double kGimbalMaxDeg = 0.0;

/// World-frame velocity set-point plus yaw rate and an optional gimbal
/// target (nullopt holds the current pitch).
struct VelocityCommand {
    EnuVector velocity_mps;
    double yaw_rate_dps = 0.0;
    std::optional<double> gimbal_pitch_target_deg;

    bool operator==(const VelocityCommand &) const = default;

    static VelocityCommand zero() { return {}; }
    bool is_zero_motion() const;
};

/// Scales the horizontal and vertical velocity and the yaw rate into the
/// vehicle limits and clamps the gimbal target into [-90, 0].
VelocityCommand clamp_command(const VelocityCommand &cmd, const VehicleParams &params);

struct VehicleState {
    GeodeticPosition position;
    EnuVector velocity_mps;
    double yaw_deg = 0.0;          ///< [0, 360), 0 = north, clockwise
    double yaw_rate_dps = 0.0;
    double gimbal_pitch_deg = 0.0; ///< [-90, 0], -90 looks straight down
    double battery_pct = 100.0;
    int gps_level = 5;
    FlightPhase phase = FlightPhase::Grounded;
    std::int64_t time_us = 0;
    TakeoffDatum datum;            ///< captured when takeoff starts
    GeodeticPosition home;         ///< return-home target

    bool operator==(const VehicleState &) const = default;

    double time_s() const { return static_cast<double>(time_us) * 1e-6; }
    double altitude_rel_m() const { return wgs84_alt_to_takeoff_rel(position.altitude_m, datum); }
};

/// Terrain plus the local frame the integrator moves the vehicle in.
class SimWorld {
public:
    SimWorld(const HeightField &terrain, const GeoReference &frame) : terrain_(&terrain), frame_(frame) {}

    const HeightField &terrain() const noexcept { return *terrain_; }
    const GeoReference &frame() const noexcept { return frame_; }

    /// Ground height below `p`; outside the footprint the ground is taken to
    /// be level with `fallback_m`.
    double ground_height(const GeodeticPosition &p, double fallback_m) const;

private:
    const HeightField *terrain_;
    GeoReference frame_;
};

/// A grounded vehicle at `start` (altitude replaced by the terrain height),
/// with its datum and home captured there.
VehicleState initial_state(const GeodeticPosition &start, const SimWorld &world, double yaw_deg = 0.0);

/// Advances one fixed step of `dt` seconds (0 < dt <= 0.1).
///
/// Velocity follows v += (v_cmd - v) * dt / tau and is clamped to the limits;
/// position integrates through the world frame. Terrain contact outside
/// Grounded / TakingOff / Landing ends in Crashed. Completion of takeoff,
/// return-home and landing advances the phase. Pure and deterministic.
VehicleState step(const VehicleState &state, const VelocityCommand &cmd, double dt, const VehicleParams &params,
                  const SimWorld &world);

/// Starts a takeoff from Grounded; a repeated takeoff while TakingOff is a
/// no-op. Throws InvalidTransitionError when airborne and ValidationError
/// when the battery is at or below 10 %.
VehicleState takeoff(const VehicleState &state, const VehicleParams &params, const SimWorld &world);

/// Starts a landing at the current position. No-op while Landing; throws
/// InvalidTransitionError when not airborne.
VehicleState land(const VehicleState &state);

/// Heads for `home` and lands there. No-op while ReturningHome; throws
/// InvalidTransitionError when not airborne.
VehicleState return_home(const VehicleState &state, const GeodeticPosition &home);

/// Freezes the vehicle in place from any phase. Absorbing until
/// reset_emergency().
VehicleState emergency_stop(const VehicleState &state);

/// Leaves EmergencyStopped: Hovering when airborne, Grounded on the ground.
VehicleState reset_emergency(const VehicleState &state, const SimWorld &world);

/// Set-point for the autonomous phases (TakingOff, ReturningHome, Landing).
/// Zero for every other phase.
VelocityCommand autopilot_command(const VehicleState &state, const VehicleParams &params, const SimWorld &world);

/// Scripted GPS signal levels. Each window overrides the default over
/// [start_s, end_s).
struct GpsScenario {
    struct Window {
        double start_s = 0.0;
        double end_s = 0.0;
        int level = 5;
    };
    int default_level = 5;
    std::vector<Window> windows;
};

/// GPS level in [0, 5] for the state's simulation time; later windows win.
int gps_level_model(const VehicleState &state, const GpsScenario &scenario);

} // namespace gcs
