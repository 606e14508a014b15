// Waypoint missions: plan model, terrain validation, trajectory preview and
// the executor that flies the vehicle through the plan.
#pragma once

#include "gcs/geodesy.hpp"
#include "gcs/terrain.hpp"
#include "gcs/vehicle.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gcs {

/// A mission target. `position.altitude_m` is takeoff-relative.
struct Waypoint {
    GeodeticPosition position;
    double heading_deg = 0.0;       ///< vehicle yaw at the waypoint, [0, 360)
    double camera_pitch_deg = 0.0;  ///< [-90, 0]
    bool is_camera_waypoint = false;

    bool operator==(const Waypoint &) const = default;
};

inline constexpr std::size_t kMaxWaypoints = 99;
inline constexpr double kMinWaypointSpacingM = 0.5;

struct MissionPlan {
    std::vector<Waypoint> waypoints;
    TakeoffDatum takeoff_datum;
    double speed_mps = 5.0;

    bool operator==(const MissionPlan &) const = default;

    /// WGS84 position of waypoint `i`.
    GeodeticPosition absolute_position(std::size_t i) const;
};

enum class MissionState : std::uint8_t { Idle = 0, Uploaded = 1, Running = 2, Paused = 3, Completed = 4, Aborted = 5 };
inline constexpr int kMissionStateCount = 6;

std::string_view to_string(MissionState state);

enum class MissionAction : std::uint8_t { Start = 0, Pause = 1, Resume = 2, Abort = 3 };

struct PhotoEvent {
    std::int64_t time_us = 0;
    GeodeticPosition position;
    double yaw_deg = 0.0;
    double gimbal_pitch_deg = 0.0;
    std::size_t waypoint_index = 0;

    bool operator==(const PhotoEvent &) const = default;
};

struct MissionStatus {
    MissionState state = MissionState::Idle;
    std::size_t current_index = 0;
    bool photo_taken = false;
    std::optional<PhotoEvent> photo;

    // Leg bookkeeping for heading and camera-pitch interpolation.
    std::optional<EnuVector> leg_start;
    double leg_start_heading_deg = 0.0;
    double leg_start_pitch_deg = 0.0;

    bool operator==(const MissionStatus &) const = default;
};

struct ExecutorParams {
    double arrival_radius_m = 2.0;
    double slowdown_radius_m = 5.0;
    double yaw_gain = 2.0;  ///< deg/s of yaw rate per degree of heading error
};

/// Applies a mission-control action. Start from Uploaded, Pause from
/// Running, Resume from Paused, Abort from Uploaded / Running / Paused.
/// Throws InvalidTransitionError otherwise.
MissionStatus mission_control(const MissionStatus &status, MissionAction action);

/// Replaces whatever was loaded with a fresh plan. Rejected while Running
/// or Paused.
MissionStatus upload(const MissionStatus &status);

enum class ViolationKind { PlanInvariant, WaypointTooLow, SegmentTooLow, OutOfBounds, ApproachTooLow };

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind = ViolationKind::PlanInvariant;
    /// Waypoint index, or the index of the segment's first waypoint.
    std::size_t index = 0;
    GeodeticPosition location;      ///< WGS84
    double clearance_m = 0.0;       ///< altitude minus terrain height (negative is below ground)
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

struct PlanLimits {
    double max_h_speed = 10.0;
    std::size_t max_waypoints = kMaxWaypoints;
};

/// Checks the plan invariants, every waypoint's WGS84 altitude against
/// terrain + clearance, and each straight segment between consecutive
/// waypoints sampled every metre. Segment violations report the sample with
/// the least clearance. The approach from above the takeoff point to the
/// first waypoint (index 0, ApproachTooLow) is checked the same way.
ValidationReport validate_plan(const MissionPlan &plan, const HeightField &terrain, double clearance_m = 5.0,
                               const PlanLimits &limits = {});

/// Straight-segment interpolation of the plan in WGS84: every waypoint
/// vertex in order, with `samples_per_segment` evenly spaced points between
/// consecutive vertices.
std::vector<GeodeticPosition> preview_polyline(const MissionPlan &plan, std::size_t samples_per_segment);

/// One executor tick. Produces the velocity command toward the current
/// waypoint and the updated status. Aborts when the vehicle has crashed or
/// been emergency-stopped; outside Running it commands a hover.
std::pair<VelocityCommand, MissionStatus> executor_step(const MissionStatus &status, const MissionPlan &plan,
                                                        const VehicleState &vehicle, const VehicleParams &params,
                                                        const GeoReference &frame, const ExecutorParams &exec = {});

} // namespace gcs
