// The simulation actor: owns the vehicle, the mission and the operator
// inputs, applies protocol messages in arrival order and advances the world
// one fixed tick at a time.
#pragma once

#include "gcs/flight_log.hpp"
#include "gcs/protocol.hpp"
#include "gcs/server/scenario.hpp"

#include <optional>

namespace gcs {

/// Arbitration between the operator and the autonomous modes:
///
///  - TakingOff, ReturningHome and Landing fly the autopilot.
///  - A Running mission flies the executor; ControlInput has no effect.
///  - With the safety override active ControlInput has no effect.
///  - Otherwise the last accepted ControlInput drives the vehicle. Hovering
///    becomes Manual on the first non-zero input and returns to Hovering
///    when the input goes back to zero.
///
/// Accepting a mission start or raising the override discards the stored
/// ControlInput, so no stale input survives either.
class Simulation {
public:
    /// `terrain` must outlive the simulation.
    Simulation(const Scenario &scenario, const HeightField &terrain);

    /// Applies one client message and reports the outcome.
    protocol::Ack handle(const protocol::Message &message);

    struct TickResult {
        std::optional<protocol::Telemetry> telemetry;
        std::optional<LogRecord> record;  ///< sampled with the telemetry
    };

    /// Advances one tick of 1 / tick_hz seconds.
    TickResult tick();

    const VehicleState &vehicle() const noexcept { return vehicle_; }
    const MissionStatus &mission() const noexcept { return mission_; }
    const std::optional<MissionPlan> &plan() const noexcept { return plan_; }
    const UserPose &user() const noexcept { return user_; }
    bool override_active() const noexcept { return override_active_; }
    std::int64_t time_us() const noexcept { return vehicle_.time_us; }
    const SimWorld &world() const noexcept { return world_; }

    /// Leaves EmergencyStopped. Not reachable from the wire protocol.
    void reset_emergency();

    /// The command applied on the most recent tick.
    const VelocityCommand &last_command() const noexcept { return last_command_; }

private:
    protocol::AckCode apply(const protocol::ControlInput &m);
    protocol::AckCode apply(const protocol::WaypointUpload &m);
    protocol::AckCode apply(const protocol::MissionCommand &m);
    protocol::AckCode apply(const protocol::VehicleCommand &m);
    protocol::AckCode apply(const protocol::SafetyOverride &m);
    protocol::AckCode apply(const protocol::UserPoseMsg &m);
    protocol::AckCode apply(const protocol::Telemetry &m);
    protocol::AckCode apply(const protocol::Ack &m);

    void abort_mission_if_active();
    VelocityCommand select_command();

    Scenario scenario_;
    const HeightField &terrain_;
    SimWorld world_;
    VehicleState vehicle_;
    MissionStatus mission_;
    std::optional<MissionPlan> plan_;
    std::optional<GeoReference> plan_frame_;
    UserPose user_;
    std::optional<protocol::ControlInput> control_;
    bool override_active_ = false;
    bool photo_pending_ = false;
    protocol::TelemetryScheduler scheduler_;
    VelocityCommand last_command_;
};

} // namespace gcs
