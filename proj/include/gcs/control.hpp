// Virtual-ball velocity control.
//
// The big sphere is a 3-DoF joystick whose displacement inside a unit
// bounding sphere sets the translational velocity; the small sphere moves
// along a vertical arc and sets yaw rate and camera pitch. Displacements are
// expressed in the interface frame: x = right, y = up, z = forward.
//
// Horizontal displacement is rotated into East-North by a reference yaw: the
// vehicle's heading for drone-centric control, the operator's compass
// heading for user-centric control. Vertical displacement always maps to
// climb rate.
#pragma once

#include "gcs/geodesy.hpp"
#include "gcs/vehicle.hpp"

#include <Eigen/Core>

namespace gcs {

struct BallState {
    Eigen::Vector3d displacement = Eigen::Vector3d::Zero(); ///< |d| <= 1
    bool engaged = false;
};

struct ArcState {
    double yaw_input = 0.0;   ///< [-1, 1], positive turns clockwise
    double pitch_input = 0.0; ///< [-1, 1], negative pitches the camera down
    bool engaged = false;
};

enum class ControlFrame : std::uint8_t { DroneCentric = 0, UserCentric = 1 };

struct UserPose {
    GeodeticPosition position;
    double heading_deg = 0.0; ///< compass heading the operator faces

    bool operator==(const UserPose &) const = default;
};

struct ControlParams {
    double deadzone = 0.1;        ///< fraction of the bounding radius
    double yaw_rate_gain = 90.0;  ///< deg/s at full arc deflection
    double pitch_gain = 90.0;     ///< deg at full arc deflection
    double speed_exponent = 1.0;  ///< 1 = linear response

    /// Throws ValidationError unless deadzone is in [0, 0.5) and the gains
    /// and exponent are positive.
    void validate() const;
};

/// Radial projection of a raw displacement onto the unit ball. The result
/// is engaged whenever the displacement is non-zero.
BallState clamp_ball(const Eigen::Vector3d &raw);

/// Post-deadzone deflection m = max(0, (|d| - deadzone) / (1 - deadzone)),
/// in [0, 1]. Zero when the ball is not engaged.
double feedback_level(const BallState &ball, const ControlParams &params = {});

/// Maps the two spheres onto a velocity command.
///
/// Speed along each axis is m^exponent times that axis' limit, in the
/// direction of the displacement. Yaw rate is arc.yaw_input * yaw_rate_gain.
/// A non-zero arc.pitch_input sets the gimbal target to
/// pitch_input * pitch_gain clamped to [-90, 0]; otherwise the gimbal holds.
/// The result never exceeds the vehicle limits.
VelocityCommand ball_to_command(const BallState &ball, const ArcState &arc, ControlFrame frame, double uav_yaw_deg,
                                const UserPose &user, const ControlParams &params, const VehicleParams &limits);

/// Zero motion with the gimbal held while the override is active;
/// otherwise `cmd` unchanged.
VelocityCommand apply_safety_override(const VelocityCommand &cmd, bool override_active);

} // namespace gcs
