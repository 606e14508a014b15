#include "gcs/control.hpp"
#include "gcs/errors.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gcs;

namespace {

const VehicleParams kLimits;
const ControlParams kParams;
const ArcState kNoArc;

VelocityCommand drive(const Eigen::Vector3d &d, ControlFrame frame, double uav_yaw, double user_heading,
                      const ArcState &arc = kNoArc) {
    UserPose user;
    user.heading_deg = user_heading;
    return ball_to_command(clamp_ball(d), arc, frame, uav_yaw, user, kParams, kLimits);
}

EnuVector rotate_compass(const EnuVector &v, double deg) {
    const double t = deg * std::numbers::pi / 180.0;
    return {v.east_m * std::cos(t) + v.north_m * std::sin(t), -v.east_m * std::sin(t) + v.north_m * std::cos(t),
            v.up_m};
}

} // namespace

TEST_CASE("clamp_ball projects radially") {
    const auto b = clamp_ball({2.0, 0.0, 0.0});
    CHECK(b.displacement == Eigen::Vector3d(1.0, 0.0, 0.0));
    CHECK(b.engaged);
    const auto inside = clamp_ball({0.3, -0.2, 0.1});
    CHECK(inside.displacement == Eigen::Vector3d(0.3, -0.2, 0.1));
    CHECK_FALSE(clamp_ball(Eigen::Vector3d::Zero()).engaged);

    testgen::Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        const Eigen::Vector3d raw(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
        const auto c = clamp_ball(raw);
        CHECK(c.displacement.norm() <= 1.0 + 1e-12);
        CHECK(c.displacement.normalized().dot(raw.normalized()) == doctest::Approx(1.0));
    }
}

TEST_CASE("deadzone feedback level") {
    CHECK(feedback_level(clamp_ball({0.05, 0.0, 0.0})) == 0.0);
    CHECK(feedback_level(clamp_ball({0.1, 0.0, 0.0})) == 0.0);
    CHECK(feedback_level(clamp_ball({0.55, 0.0, 0.0})) == doctest::Approx(0.5));
    CHECK(feedback_level(clamp_ball({0.0, 0.0, 1.0})) == doctest::Approx(1.0));
    CHECK(feedback_level(clamp_ball({0.0, 3.0, 0.0})) == doctest::Approx(1.0));
    ControlParams none;
    none.deadzone = 0.0;
    CHECK(feedback_level(clamp_ball({0.25, 0.0, 0.0}), none) == doctest::Approx(0.25));
}

TEST_CASE("inside the deadzone nothing moves") {
    const auto c = drive({0.05, 0.02, -0.03}, ControlFrame::DroneCentric, 0.0, 0.0);
    CHECK(c.is_zero_motion());
    CHECK_FALSE(c.gimbal_pitch_target_deg.has_value());
}

TEST_CASE("drone-centric axes follow the vehicle heading") {
    // Full forward with the vehicle facing east.
    auto c = drive({0.0, 0.0, 1.0}, ControlFrame::DroneCentric, 90.0, 0.0);
    CHECK(c.velocity_mps.east_m == doctest::Approx(10.0));
    CHECK(std::abs(c.velocity_mps.north_m) < 1e-12);
    // Full right with the vehicle facing north.
    c = drive({1.0, 0.0, 0.0}, ControlFrame::DroneCentric, 0.0, 0.0);
    CHECK(c.velocity_mps.east_m == doctest::Approx(10.0));
    // Full up.
    c = drive({0.0, 1.0, 0.0}, ControlFrame::DroneCentric, 123.0, 0.0);
    CHECK(c.velocity_mps.up_m == doctest::Approx(4.0));
    CHECK(c.velocity_mps.horizontal_norm() < 1e-12);
}

TEST_CASE("user-centric axes follow the operator") {
    // Operator faces south; pushing left means east.
    const auto c = drive({-1.0, 0.0, 0.0}, ControlFrame::UserCentric, 37.0, 180.0);
    CHECK(c.velocity_mps.east_m == doctest::Approx(10.0));
    CHECK(std::abs(c.velocity_mps.north_m) < 1e-9);
    // Pulling toward the operator moves toward them: north.
    const auto pull = drive({0.0, 0.0, -1.0}, ControlFrame::UserCentric, 37.0, 180.0);
    CHECK(pull.velocity_mps.north_m == doctest::Approx(10.0));
}

TEST_CASE("linear speed curve per axis") {
    const auto c = drive({0.0, 0.0, 0.55}, ControlFrame::DroneCentric, 0.0, 0.0);
    CHECK(c.velocity_mps.north_m == doctest::Approx(5.0));
    ControlParams quad = kParams;
    quad.speed_exponent = 2.0;
    const auto q = ball_to_command(clamp_ball({0.0, 0.0, 0.55}), kNoArc, ControlFrame::DroneCentric, 0.0, {}, quad,
                                   kLimits);
    CHECK(q.velocity_mps.north_m == doctest::Approx(2.5));
}

TEST_CASE("arc sets yaw rate and camera pitch") {
    const ArcState arc{0.5, -0.5, true};
    const auto c = drive(Eigen::Vector3d::Zero(), ControlFrame::DroneCentric, 0.0, 0.0, arc);
    CHECK(c.yaw_rate_dps == doctest::Approx(45.0));
    REQUIRE(c.gimbal_pitch_target_deg.has_value());
    CHECK(*c.gimbal_pitch_target_deg == doctest::Approx(-45.0));
    const auto up = drive(Eigen::Vector3d::Zero(), ControlFrame::DroneCentric, 0.0, 0.0, {0.0, 0.8, true});
    CHECK(*up.gimbal_pitch_target_deg == 0.0);
    const auto held = drive(Eigen::Vector3d::Zero(), ControlFrame::DroneCentric, 0.0, 0.0, {0.2, 0.0, true});
    CHECK_FALSE(held.gimbal_pitch_target_deg.has_value());
    const auto idle = drive(Eigen::Vector3d::Zero(), ControlFrame::DroneCentric, 0.0, 0.0, {1.0, -1.0, false});
    CHECK(idle.yaw_rate_dps == 0.0);
}

TEST_CASE("outputs respect the vehicle limits") {
    testgen::Rng rng(8);
    for (int i = 0; i < 2000; ++i) {
        const ArcState arc{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.coin()};
        const auto c = drive(testgen::ball(rng), rng.coin() ? ControlFrame::UserCentric : ControlFrame::DroneCentric,
                             rng.uniform(0, 360), rng.uniform(0, 360), arc);
        CHECK(c.velocity_mps.horizontal_norm() <= kLimits.max_h_speed + 1e-9);
        CHECK(std::abs(c.velocity_mps.up_m) <= kLimits.max_v_speed + 1e-9);
        CHECK(std::abs(c.yaw_rate_dps) <= kLimits.max_yaw_rate);
        if (c.gimbal_pitch_target_deg) {
            CHECK(*c.gimbal_pitch_target_deg >= -90.0);
            CHECK(*c.gimbal_pitch_target_deg <= 0.0);
        }
    }
}

TEST_CASE("frame equivalence and rotation equivariance") {
    testgen::Rng rng(9);
    for (int i = 0; i < 2000; ++i) {
        const auto d = testgen::ball(rng);
        const double yaw = rng.uniform(0, 360);
        const auto a = drive(d, ControlFrame::DroneCentric, yaw, rng.uniform(0, 360));
        const auto b = drive(d, ControlFrame::UserCentric, rng.uniform(0, 360), yaw);
        CHECK((a.velocity_mps - b.velocity_mps).norm() < 1e-9);

        const double turn = rng.uniform(-360, 360);
        const auto r = drive(d, ControlFrame::DroneCentric, yaw + turn, 0.0);
        CHECK((r.velocity_mps - rotate_compass(a.velocity_mps, turn)).norm() < 1e-9);
    }
}

TEST_CASE("safety override") {
    VelocityCommand c;
    c.velocity_mps = {1.0, 2.0, 3.0};
    c.yaw_rate_dps = 10.0;
    c.gimbal_pitch_target_deg = -10.0;
    CHECK(apply_safety_override(c, true).is_zero_motion());
    CHECK_FALSE(apply_safety_override(c, true).gimbal_pitch_target_deg.has_value());
    const auto same = apply_safety_override(c, false);
    CHECK(same.velocity_mps == c.velocity_mps);
    CHECK(same.gimbal_pitch_target_deg == c.gimbal_pitch_target_deg);
}

TEST_CASE("parameter validation") {
    ControlParams p;
    p.deadzone = 0.7;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.speed_exponent = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    CHECK_NOTHROW(ControlParams{}.validate());
}
