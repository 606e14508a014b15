#include "gcs/overlay.hpp"
#include "gcs/terrain.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace gcs;

namespace {

struct Fixture {
    HeightField terrain = [] {
        SyntheticFieldSpec spec;
        spec.base_m = 215.0;
        spec.slope_m = 95.0;
        spec.southwest_origin = {51.03, 13.73, 0.0};
        return synthetic_field(spec);
    }();
    GeodeticPosition start = [this] {
        auto p = terrain.local_to_geodetic(50.0, 20.0);
        p.altitude_m = *terrain.height_at_local(50.0, 20.0);
        return p;
    }();
    TakeoffDatum datum{start, start.altitude_m};
    GeoReference ref{start};

    UserPose user_at(double e, double n) const {
        UserPose u;
        u.position = terrain.local_to_geodetic(e, n);
        u.position.altitude_m = *terrain.height_at_local(e, n) + 1.7;
        return u;
    }

    VehicleState vehicle_at(double e, double n, double alt_rel) const {
        VehicleState v;
        v.position = terrain.local_to_geodetic(e, n);
        v.position.altitude_m = start.altitude_m + alt_rel;
        v.datum = datum;
        return v;
    }
};

} // namespace

TEST_CASE_FIXTURE(Fixture, "leading lines") {
    auto v = vehicle_at(80.0, 140.0, 70.0);
    v.velocity_mps = {3.0, 4.0, -1.0};
    v.gps_level = 4;
    v.battery_pct = 77.0;
    const auto user = user_at(50.0, 10.0);
    const auto s = compute_overlay(user, v, terrain, ref, datum);

    // Horizontal line starts at the operator's feet, not their eyes.
    CHECK((s.horizontal_line.from - ref.to_enu(terrain.local_to_geodetic(50.0, 10.0))).horizontal_norm() < 1e-6);
    const double feet_height = *terrain.height_at_local(50.0, 10.0);
    CHECK(s.user_ground.up_m == doctest::Approx(feet_height - start.altitude_m).epsilon(1e-4));

    CHECK(s.horizontal_line.to == s.vertical_line.from);
    CHECK(s.vertical_line.to == s.uav_air);
    CHECK(s.vertical_line.from.east_m == s.uav_air.east_m);
    CHECK(s.vertical_line.from.north_m == s.uav_air.north_m);
    const double ground_below = *terrain.height_at_local(80.0, 140.0);
    CHECK(s.vertical_line.length() == doctest::Approx(start.altitude_m + 70.0 - ground_below).epsilon(1e-6));
    CHECK_FALSE(s.uav_ground_fallback);

    CHECK(s.ground_distance_m == doctest::Approx(std::hypot(30.0, 130.0)).epsilon(1e-4));
    CHECK(s.ground_speed_mps == doctest::Approx(5.0));
    CHECK(s.vertical_speed_mps == -1.0);
    CHECK(s.altitude_rel_m == doctest::Approx(70.0));
    CHECK(s.gps_level == 4);
    CHECK(s.battery_pct == 77.0);
    CHECK(s.scale_factor == 1.0);
}

TEST_CASE_FIXTURE(Fixture, "vehicle beyond the terrain uses the datum height") {
    const auto v = vehicle_at(150.0, 40.0, 30.0);
    const auto s = compute_overlay(user_at(50.0, 10.0), v, terrain, ref, datum);
    CHECK(s.uav_ground_fallback);
    CHECK(s.vertical_line.length() == doctest::Approx(30.0).epsilon(1e-3));
}

TEST_CASE("adaptive scaling") {
    CHECK(overlay_scale(FixedScaling{}, 1000.0) == 1.0);
    const AdaptiveScaling a{50.0};
    CHECK(overlay_scale(a, 100.0) == 2.0);
    CHECK(overlay_scale(a, 1.0) == kMinScaleFactor);
    CHECK(overlay_scale(a, 1e6) == kMaxScaleFactor);
    testgen::Rng rng(31);
    double prev = 0.0;
    for (double d = 0.0; d < 1000.0; d += rng.uniform(0.0, 5.0)) {
        const double s = overlay_scale(a, d);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE_FIXTURE(Fixture, "planned path overlay") {
    MissionPlan plan;
    plan.takeoff_datum = datum;
    Waypoint a;
    a.position = terrain.local_to_geodetic(20.0, 70.0);
    a.position.altitude_m = 40.0;
    Waypoint b = a;
    b.position = terrain.local_to_geodetic(80.0, 130.0);
    b.position.altitude_m = 60.0;
    plan.waypoints = {a, b};

    const auto path = planned_path_overlay(plan, ref, 1);
    REQUIRE(path.size() == 3);
    CHECK(path[0].up_m == doctest::Approx(40.0).epsilon(1e-4));
    CHECK(path[2].up_m == doctest::Approx(60.0).epsilon(1e-4));
    CHECK((path[1] - (path[0] + path[2]) * 0.5).norm() < 1e-6);

    MissionStatus st;
    CHECK(planned_path_overlay(plan, st, ref).empty());
    st.state = MissionState::Running;
    CHECK(planned_path_overlay(plan, st, ref).size() == 2);
    st.state = MissionState::Completed;
    CHECK(planned_path_overlay(plan, st, ref).empty());
}
