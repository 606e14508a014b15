#include "gcs/server/simulation.hpp"

#include "gcs/errors.hpp"

namespace gcs {

using protocol::AckCode;

namespace {

bool is_mission_active(MissionState s) { return s == MissionState::Running || s == MissionState::Paused; }

bool can_start_mission(FlightPhase p) { return p == FlightPhase::Hovering || p == FlightPhase::Manual; }

GeoReference world_frame(const Scenario &sc, const HeightField &terrain) {
    GeodeticPosition origin{sc.start_lat_deg, sc.start_lon_deg, 0.0};
    origin.altitude_m = terrain.try_height_at(origin).value_or(0.0);
    return GeoReference(origin);
}

} // namespace

Simulation::Simulation(const Scenario &scenario, const HeightField &terrain)
    : scenario_(scenario), terrain_(terrain), world_(terrain, world_frame(scenario, terrain)) {
    validate_scenario(scenario_, terrain_);
    vehicle_ = initial_state({scenario_.start_lat_deg, scenario_.start_lon_deg, 0.0}, world_, scenario_.start_yaw_deg);
    vehicle_.gps_level = gps_level_model(vehicle_, scenario_.gps);
    if (scenario_.user) {
        user_ = *scenario_.user;
    } else {
        user_.position = vehicle_.position;
        user_.heading_deg = 0.0;
    }
    user_.position.altitude_m = terrain_.try_height_at(user_.position).value_or(vehicle_.datum.terrain_height_m);
}

protocol::Ack Simulation::handle(const protocol::Message &message) {
    protocol::Ack ack;
    ack.ref_tag = static_cast<std::uint8_t>(protocol::type_of(message));
    try {
        ack.code = std::visit([this](const auto &m) { return apply(m); }, message);
    } catch (const InvalidTransitionError &) {
        ack.code = AckCode::InvalidTransition;
    } catch (const ValidationError &) {
        ack.code = AckCode::ValidationFailed;
    }
    return ack;
}

AckCode Simulation::apply(const protocol::ControlInput &m) {
    if (override_active_ || mission_.state == MissionState::Running) {
        return AckCode::Ok;
    }
    control_ = m;
    return AckCode::Ok;
}

AckCode Simulation::apply(const protocol::WaypointUpload &m) {
    if (is_mission_active(mission_.state)) {
        return AckCode::InvalidTransition;
    }
    MissionPlan plan;
    plan.takeoff_datum = vehicle_.datum;
    plan.speed_mps = scenario_.mission_speed_mps;
    plan.waypoints.reserve(m.waypoints.size());
    for (const auto &w : m.waypoints) {
        plan.waypoints.push_back(protocol::to_waypoint(w));
    }
    PlanLimits limits;
    limits.max_h_speed = scenario_.vehicle.max_h_speed;
    if (!validate_plan(plan, terrain_, scenario_.clearance_m, limits).ok()) {
        return AckCode::ValidationFailed;
    }
    mission_ = upload(mission_);
    plan_frame_.emplace(plan.takeoff_datum.takeoff_position);
    plan_ = std::move(plan);
    return AckCode::Ok;
}

AckCode Simulation::apply(const protocol::MissionCommand &m) {
    switch (m.action) {
    case MissionAction::Start:
    case MissionAction::Resume:
        if (!can_start_mission(vehicle_.phase) || !plan_) {
            return AckCode::InvalidTransition;
        }
        mission_ = mission_control(mission_, m.action);
        vehicle_.phase = FlightPhase::Mission;
        control_.reset();
        return AckCode::Ok;
    case MissionAction::Pause:
    case MissionAction::Abort:
        mission_ = mission_control(mission_, m.action);
        if (vehicle_.phase == FlightPhase::Mission) {
            vehicle_.phase = FlightPhase::Hovering;
        }
        return AckCode::Ok;
    }
    return AckCode::ValidationFailed;
}

AckCode Simulation::apply(const protocol::VehicleCommand &m) {
    switch (m.action) {
    case protocol::VehicleAction::Takeoff:
        vehicle_ = takeoff(vehicle_, scenario_.vehicle, world_);
        return AckCode::Ok;
    case protocol::VehicleAction::Land:
        vehicle_ = land(vehicle_);
        abort_mission_if_active();
        return AckCode::Ok;
    case protocol::VehicleAction::ReturnHome:
        vehicle_ = return_home(vehicle_, vehicle_.home);
        abort_mission_if_active();
        return AckCode::Ok;
    case protocol::VehicleAction::EmergencyStop:
        vehicle_ = emergency_stop(vehicle_);
        abort_mission_if_active();
        control_.reset();
        last_command_ = VelocityCommand::zero();
        return AckCode::Ok;
    }
    return AckCode::ValidationFailed;
}

AckCode Simulation::apply(const protocol::SafetyOverride &m) {
    override_active_ = m.active;
    if (override_active_) {
        control_.reset();
    }
    return AckCode::Ok;
}

AckCode Simulation::apply(const protocol::UserPoseMsg &m) {
    user_.position = {m.lat, m.lon, m.alt};
    user_.heading_deg = normalize_heading_deg(m.heading);
    return AckCode::Ok;
}

// Only the server emits these.
AckCode Simulation::apply(const protocol::Telemetry &) { return AckCode::ValidationFailed; }
AckCode Simulation::apply(const protocol::Ack &) { return AckCode::ValidationFailed; }

void Simulation::abort_mission_if_active() {
    if (is_mission_active(mission_.state)) {
        mission_ = mission_control(mission_, MissionAction::Abort);
    }
}

void Simulation::reset_emergency() { vehicle_ = gcs::reset_emergency(vehicle_, world_); }

VelocityCommand Simulation::select_command() {
    switch (vehicle_.phase) {
    case FlightPhase::TakingOff:
    case FlightPhase::ReturningHome:
    case FlightPhase::Landing:
        return autopilot_command(vehicle_, scenario_.vehicle, world_);
    case FlightPhase::Mission: {
        if (mission_.state != MissionState::Running || !plan_) {
            return VelocityCommand::zero();
        }
        const bool had_photo = mission_.photo_taken;
        auto [cmd, next] = executor_step(mission_, *plan_, vehicle_, scenario_.vehicle, *plan_frame_,
                                         scenario_.executor);
        mission_ = std::move(next);
        if (mission_.photo_taken && !had_photo) {
            photo_pending_ = true;
        }
        if (mission_.state == MissionState::Completed) {
            vehicle_.phase = FlightPhase::Hovering;
        }
        return cmd;
    }
    case FlightPhase::Hovering:
    case FlightPhase::Manual: {
        if (!control_ || override_active_) {
            vehicle_.phase = FlightPhase::Hovering;
            return VelocityCommand::zero();
        }
        const BallState ball = clamp_ball(Eigen::Vector3d(control_->ball_x, control_->ball_y, control_->ball_z));
        const ArcState arc{control_->arc_yaw, control_->arc_pitch, control_->arc_yaw != 0.0F || control_->arc_pitch != 0.0F};
        const VelocityCommand cmd = ball_to_command(ball, arc, control_->frame, vehicle_.yaw_deg, user_,
                                                    scenario_.control, scenario_.vehicle);
        vehicle_.phase = cmd.is_zero_motion() ? FlightPhase::Hovering : FlightPhase::Manual;
        return cmd;
    }
    default:
        return VelocityCommand::zero();
    }
}

Simulation::TickResult Simulation::tick() {
    last_command_ = select_command();
    vehicle_ = step(vehicle_, last_command_, scenario_.dt_s(), scenario_.vehicle, world_);
    vehicle_.gps_level = gps_level_model(vehicle_, scenario_.gps);
    if (vehicle_.phase == FlightPhase::Crashed || vehicle_.phase == FlightPhase::EmergencyStopped) {
        abort_mission_if_active();
    }

    TickResult out;
    if (const auto seq = scheduler_.poll(vehicle_.time_us)) {
        out.telemetry = protocol::make_telemetry(*seq, vehicle_, mission_);
        out.record = make_log_record(vehicle_, mission_, photo_pending_);
        photo_pending_ = false;
    }
    return out;
}

} // namespace gcs
