#include "gcs/mission.hpp"

#include "gcs/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace gcs {

namespace {

constexpr double kSegmentSampleSpacingM = 1.0;
constexpr double kClimbFirstMarginM = 1.0;

constexpr std::array<std::string_view, kMissionStateCount> kStateNames = {"Idle",   "Uploaded",  "Running",
                                                                          "Paused", "Completed", "Aborted"};

bool is_active(MissionState s) {
    return s == MissionState::Uploaded || s == MissionState::Running || s == MissionState::Paused;
}

std::string describe(MissionState s) { return std::string(to_string(s)); }

void check_invariants(const MissionPlan &plan, const PlanLimits &limits, const GeoReference &frame,
                      std::vector<Violation> &out) {
    auto add = [&out](std::size_t index, const GeodeticPosition &where, std::string msg) {
        out.push_back({ViolationKind::PlanInvariant, index, where, 0.0, std::move(msg)});
    };
    const auto &wps = plan.waypoints;
    if (wps.empty() || wps.size() > limits.max_waypoints) {
        add(0, plan.takeoff_datum.takeoff_position,
            "plan must have between 1 and " + std::to_string(limits.max_waypoints) + " waypoints");
    }
    if (!(plan.speed_mps > 0.0) || plan.speed_mps > limits.max_h_speed) {
        add(0, plan.takeoff_datum.takeoff_position, "cruise speed must lie in (0, max_h_speed]");
    }
    std::size_t cameras = 0;
    for (std::size_t i = 0; i < wps.size(); ++i) {
        const auto &wp = wps[i];
        const GeodeticPosition where = plan.absolute_position(i);
        if (!is_valid(wp.position)) {
            add(i, where, "invalid latitude/longitude");
            continue;
        }
        if (wp.position.altitude_m < 0.0) {
            add(i, where, "takeoff-relative altitude must be non-negative");
        }
        if (!(wp.heading_deg >= 0.0 && wp.heading_deg < 360.0)) {
            add(i, where, "heading must lie in [0, 360)");
        }
        if (!(wp.camera_pitch_deg >= kGimbalMinDeg && wp.camera_pitch_deg <= kGimbalMaxDeg)) {
            add(i, where, "camera pitch must lie in [-90, 0]");
        }
        cameras += wp.is_camera_waypoint ? 1 : 0;
        if (i > 0 && is_valid(wps[i - 1].position)) {
            const double gap = (frame.to_enu(where) - frame.to_enu(plan.absolute_position(i - 1))).norm();
            if (gap < kMinWaypointSpacingM) {
                add(i, where, "waypoint closer than 0.5 m to its predecessor");
            }
        }
    }
    if (cameras > 1) {
        add(0, plan.takeoff_datum.takeoff_position, "at most one camera waypoint is allowed");
    }
}

void check_segment(const GeoReference &frame, const HeightField &terrain, double clearance_m, const EnuVector &a,
                   const EnuVector &b, ViolationKind kind, std::size_t index, std::vector<Violation> &out) {
    const EnuVector ab = b - a;
    const auto samples =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ab.norm() / kSegmentSampleSpacingM)));
    std::optional<Violation> worst;
    std::optional<GeodeticPosition> outside;
    for (std::size_t k = 0; k <= samples; ++k) {
        const GeodeticPosition p = frame.to_geodetic(a + ab * (static_cast<double>(k) / static_cast<double>(samples)));
        const auto ground = terrain.try_height_at(p);
        if (!ground) {
            if (!outside) {
                outside = p;
            }
            continue;
        }
        const double clearance = p.altitude_m - *ground;
        if (clearance < clearance_m && (!worst || clearance < worst->clearance_m)) {
            worst = Violation{kind, index, p, clearance, "path below terrain + clearance"};
        }
    }
    if (outside) {
        out.push_back({ViolationKind::OutOfBounds, index, *outside, 0.0, "path leaves terrain"});
    }
    if (worst) {
        out.push_back(*worst);
    }
}

} // namespace

GeodeticPosition MissionPlan::absolute_position(std::size_t i) const {
    GeodeticPosition p = waypoints.at(i).position;
    p.altitude_m = takeoff_rel_to_wgs84(p.altitude_m, takeoff_datum);
    return p;
}

std::string_view to_string(MissionState state) { return kStateNames.at(static_cast<std::size_t>(state)); }

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::PlanInvariant:
        return "plan-invariant";
    case ViolationKind::WaypointTooLow:
        return "waypoint-too-low";
    case ViolationKind::SegmentTooLow:
        return "segment-too-low";
    case ViolationKind::OutOfBounds:
        return "out-of-bounds";
    case ViolationKind::ApproachTooLow:
        return "approach-too-low";
    }
    return "unknown";
}

MissionStatus mission_control(const MissionStatus &status, MissionAction action) {
    MissionStatus next = status;
    switch (action) {
    case MissionAction::Start:
        if (status.state != MissionState::Uploaded) {
            throw InvalidTransitionError("start: mission is " + describe(status.state) + ", not Uploaded");
        }
        next = MissionStatus{};
        next.state = MissionState::Running;
        return next;
    case MissionAction::Pause:
        if (status.state != MissionState::Running) {
            throw InvalidTransitionError("pause: mission is " + describe(status.state) + ", not Running");
        }
        next.state = MissionState::Paused;
        return next;
    case MissionAction::Resume:
        if (status.state != MissionState::Paused) {
            throw InvalidTransitionError("resume: mission is " + describe(status.state) + ", not Paused");
        }
        next.state = MissionState::Running;
        return next;
    case MissionAction::Abort:
        if (!is_active(status.state)) {
            throw InvalidTransitionError("abort: mission is " + describe(status.state));
        }
        next.state = MissionState::Aborted;
        return next;
    }
    throw InvalidTransitionError("unknown mission action");
}

MissionStatus upload(const MissionStatus &status) {
    if (status.state == MissionState::Running || status.state == MissionState::Paused) {
        throw InvalidTransitionError("upload: a mission is already in progress");
    }
    MissionStatus next;
    next.state = MissionState::Uploaded;
    return next;
}

ValidationReport validate_plan(const MissionPlan &plan, const HeightField &terrain, double clearance_m,
                               const PlanLimits &limits) {
    ValidationReport report;
    const GeoReference frame(plan.takeoff_datum.takeoff_position);
    check_invariants(plan, limits, frame, report.violations);

    const auto &wps = plan.waypoints;
    for (std::size_t i = 0; i < wps.size(); ++i) {
        if (!is_valid(wps[i].position)) {
            continue;
        }
        const GeodeticPosition where = plan.absolute_position(i);
        const auto ground = terrain.try_height_at(where);
        if (!ground) {
            report.violations.push_back({ViolationKind::OutOfBounds, i, where, 0.0, "waypoint outside terrain"});
            continue;
        }
        const double clearance = where.altitude_m - *ground;
        if (clearance < clearance_m) {
            report.violations.push_back({ViolationKind::WaypointTooLow, i, where, clearance,
                                         "waypoint below terrain + clearance"});
        }
    }

    if (!wps.empty() && is_valid(wps[0].position)) {
        // The executor climbs above the takeoff point to just below the first
        // waypoint's altitude and then flies straight to it.
        const EnuVector first = frame.to_enu(plan.absolute_position(0));
        const EnuVector start{0.0, 0.0, std::max(0.0, first.up_m - kClimbFirstMarginM)};
        check_segment(frame, terrain, clearance_m, start, first, ViolationKind::ApproachTooLow, 0, report.violations);
    }
    for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
        if (!is_valid(wps[i].position) || !is_valid(wps[i + 1].position)) {
            continue;
        }
        check_segment(frame, terrain, clearance_m, frame.to_enu(plan.absolute_position(i)),
                      frame.to_enu(plan.absolute_position(i + 1)), ViolationKind::SegmentTooLow, i,
                      report.violations);
    }
    return report;
}

std::vector<GeodeticPosition> preview_polyline(const MissionPlan &plan, std::size_t samples_per_segment) {
    std::vector<GeodeticPosition> out;
    if (plan.waypoints.empty()) {
        return out;
    }
    const GeoReference frame(plan.takeoff_datum.takeoff_position);
    out.reserve(plan.waypoints.size() * (samples_per_segment + 1));
    out.push_back(plan.absolute_position(0));
    for (std::size_t i = 0; i + 1 < plan.waypoints.size(); ++i) {
        const GeodeticPosition next = plan.absolute_position(i + 1);
        const EnuVector a = frame.to_enu(out.back());
        const EnuVector ab = frame.to_enu(next) - a;
        for (std::size_t k = 1; k <= samples_per_segment; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(samples_per_segment + 1);
            out.push_back(frame.to_geodetic(a + ab * t));
        }
        out.push_back(next);
    }
    return out;
}

std::pair<VelocityCommand, MissionStatus> executor_step(const MissionStatus &status, const MissionPlan &plan,
                                                        const VehicleState &vehicle, const VehicleParams &params,
                                                        const GeoReference &frame, const ExecutorParams &exec) {
    MissionStatus st = status;
    if (vehicle.phase == FlightPhase::Crashed || vehicle.phase == FlightPhase::EmergencyStopped) {
        if (is_active(st.state)) {
            st.state = MissionState::Aborted;
        }
        return {VelocityCommand::zero(), st};
    }
    if (st.state != MissionState::Running) {
        return {VelocityCommand::zero(), st};
    }

    const EnuVector here = frame.to_enu(vehicle.position);
    if (!st.leg_start) {
        st.leg_start = here;
        st.leg_start_heading_deg = vehicle.yaw_deg;
        st.leg_start_pitch_deg = vehicle.gimbal_pitch_deg;
    }

    EnuVector target;
    while (true) {
        if (st.current_index >= plan.waypoints.size()) {
            st.state = MissionState::Completed;
            VelocityCommand hold;
            hold.gimbal_pitch_target_deg = st.leg_start_pitch_deg;
            return {hold, st};
        }
        const Waypoint &wp = plan.waypoints[st.current_index];
        target = frame.to_enu(plan.absolute_position(st.current_index));
        if ((target - here).norm() > exec.arrival_radius_m) {
            break;
        }
        if (wp.is_camera_waypoint && !st.photo_taken) {
            st.photo_taken = true;
            st.photo = PhotoEvent{vehicle.time_us, vehicle.position, vehicle.yaw_deg, vehicle.gimbal_pitch_deg,
                                  st.current_index};
        }
        st.leg_start = target;
        st.leg_start_heading_deg = wp.heading_deg;
        st.leg_start_pitch_deg = wp.camera_pitch_deg;
        ++st.current_index;
    }

    const Waypoint &wp = plan.waypoints[st.current_index];
    const EnuVector delta = target - here;
    const double dist = delta.norm();

    VelocityCommand cmd;
    const double speed = plan.speed_mps * std::min(1.0, dist / exec.slowdown_radius_m);
    if (st.current_index == 0 && delta.up_m > kClimbFirstMarginM) {
        // The approach from wherever the mission started has not been
        // checked against terrain: climb to the first waypoint's altitude
        // before moving horizontally.
        cmd.velocity_mps.up_m = std::min(params.max_v_speed, std::max(speed, 1.0));
    } else {
        EnuVector v = delta * (speed / dist);
        double scale = 1.0;
        if (v.horizontal_norm() > params.max_h_speed) {
            scale = std::min(scale, params.max_h_speed / v.horizontal_norm());
        }
        if (std::abs(v.up_m) > params.max_v_speed) {
            scale = std::min(scale, params.max_v_speed / std::abs(v.up_m));
        }
        cmd.velocity_mps = v * scale;
    }

    const double leg_len = (target - *st.leg_start).norm();
    const double f = leg_len > 0.0 ? std::clamp(1.0 - dist / leg_len, 0.0, 1.0) : 1.0;
    const double desired_heading = normalize_heading_deg(
        st.leg_start_heading_deg + heading_difference_deg(st.leg_start_heading_deg, wp.heading_deg) * f);
    cmd.yaw_rate_dps = std::clamp(exec.yaw_gain * heading_difference_deg(vehicle.yaw_deg, desired_heading),
                                  -params.max_yaw_rate, params.max_yaw_rate);
    cmd.gimbal_pitch_target_deg = st.leg_start_pitch_deg + (wp.camera_pitch_deg - st.leg_start_pitch_deg) * f;
    return {cmd, st};
}

} // namespace gcs
