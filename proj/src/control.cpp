#include "gcs/control.hpp"

#include "gcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gcs {

void ControlParams::validate() const {
    if (!(deadzone >= 0.0 && deadzone < 0.5)) {
        throw ValidationError("ControlParams: deadzone must lie in [0, 0.5)");
    }
    if (!(yaw_rate_gain > 0.0) || !(pitch_gain > 0.0) || !(speed_exponent > 0.0) || !std::isfinite(yaw_rate_gain) ||
        !std::isfinite(pitch_gain) || !std::isfinite(speed_exponent)) {
        throw ValidationError("ControlParams: gains and exponent must be positive");
    }
}

BallState clamp_ball(const Eigen::Vector3d &raw) {
    BallState ball;
    const double n = raw.norm();
    ball.displacement = n > 1.0 ? Eigen::Vector3d(raw / n) : raw;
    ball.engaged = n > 0.0;
    return ball;
}

double feedback_level(const BallState &ball, const ControlParams &params) {
    if (!ball.engaged) {
        return 0.0;
    }
    const double n = std::min(ball.displacement.norm(), 1.0);
    return std::clamp((n - params.deadzone) / (1.0 - params.deadzone), 0.0, 1.0);
}

VelocityCommand ball_to_command(const BallState &ball, const ArcState &arc, ControlFrame frame, double uav_yaw_deg,
                                const UserPose &user, const ControlParams &params, const VehicleParams &limits) {
    VelocityCommand cmd;

    const double m = feedback_level(ball, params);
    if (m > 0.0) {
        const Eigen::Vector3d &d = ball.displacement;
        const double n = d.norm();
        const double gain = std::pow(m, params.speed_exponent) / n;
        const double right = d.x() * gain * limits.max_h_speed;
        const double forward = d.z() * gain * limits.max_h_speed;

        const double ref_yaw = frame == ControlFrame::DroneCentric ? uav_yaw_deg : user.heading_deg;
        const double psi = ref_yaw * std::numbers::pi / 180.0;
        const double s = std::sin(psi);
        const double c = std::cos(psi);
        // Forward points along the reference heading, right is 90 deg clockwise of it.
        cmd.velocity_mps.east_m = right * c + forward * s;
        cmd.velocity_mps.north_m = -right * s + forward * c;
        cmd.velocity_mps.up_m = d.y() * gain * limits.max_v_speed;
    }

    if (arc.engaged) {
        cmd.yaw_rate_dps = std::clamp(arc.yaw_input, -1.0, 1.0) * params.yaw_rate_gain;
        if (arc.pitch_input != 0.0) {
            cmd.gimbal_pitch_target_deg = std::clamp(arc.pitch_input, -1.0, 1.0) * params.pitch_gain;
        }
    }
    return clamp_command(cmd, limits);
}

VelocityCommand apply_safety_override(const VelocityCommand &cmd, bool override_active) {
    return override_active ? VelocityCommand::zero() : cmd;
}

} // namespace gcs
