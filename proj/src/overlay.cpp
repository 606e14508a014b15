#include "gcs/overlay.hpp"

#include <algorithm>
#include <iterator>

namespace gcs {

double overlay_scale(const OverlayScaling &scaling, double ground_distance_m) {
    if (const auto *adaptive = std::get_if<AdaptiveScaling>(&scaling)) {
        return std::clamp(ground_distance_m / adaptive->reference_distance_m, kMinScaleFactor, kMaxScaleFactor);
    }
    return 1.0;
}

OverlaySnapshot compute_overlay(const UserPose &user, const VehicleState &vehicle, const HeightField &terrain,
                                const GeoReference &ref, const TakeoffDatum &datum, const OverlayScaling &scaling) {
    OverlaySnapshot snap;

    GeodeticPosition feet = user.position;
    feet.altitude_m = terrain.try_height_at(feet).value_or(user.position.altitude_m);
    snap.user_ground = ref.to_enu(feet);

    snap.uav_air = ref.to_enu(vehicle.position);
    GeodeticPosition below = vehicle.position;
    if (const auto h = terrain.try_height_at(below)) {
        below.altitude_m = *h;
    } else {
        below.altitude_m = datum.terrain_height_m;
        snap.uav_ground_fallback = true;
    }
    // Keep the vertical line exactly vertical in the local frame.
    snap.uav_ground = {snap.uav_air.east_m, snap.uav_air.north_m, ref.to_enu(below).up_m};

    snap.horizontal_line = {snap.user_ground, snap.uav_ground};
    snap.vertical_line = {snap.uav_ground, snap.uav_air};
    snap.ground_distance_m = ground_distance(snap.user_ground, snap.uav_air);
    snap.ground_speed_mps = vehicle.velocity_mps.horizontal_norm();
    snap.vertical_speed_mps = vehicle.velocity_mps.up_m;
    snap.altitude_rel_m = wgs84_alt_to_takeoff_rel(vehicle.position.altitude_m, datum);
    snap.gps_level = vehicle.gps_level;
    snap.battery_pct = vehicle.battery_pct;
    snap.scale_factor = overlay_scale(scaling, snap.ground_distance_m);
    return snap;
}

std::vector<EnuVector> planned_path_overlay(const MissionPlan &plan, const GeoReference &ref,
                                            std::size_t samples_per_segment) {
    const auto polyline = preview_polyline(plan, samples_per_segment);
    std::vector<EnuVector> out;
    out.reserve(polyline.size());
    std::transform(polyline.begin(), polyline.end(), std::back_inserter(out),
                   [&ref](const GeodeticPosition &p) { return ref.to_enu(p); });
    return out;
}

std::vector<EnuVector> planned_path_overlay(const MissionPlan &plan, const MissionStatus &status,
                                            const GeoReference &ref, std::size_t samples_per_segment) {
    switch (status.state) {
    case MissionState::Uploaded:
    case MissionState::Running:
    case MissionState::Paused:
        return planned_path_overlay(plan, ref, samples_per_segment);
    default:
        return {};
    }
}

} // namespace gcs
