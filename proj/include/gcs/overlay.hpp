// Spatial-overlay geometry: leading lines, telemetry panel values and the
// planned-path polyline, all in the operator-anchored ENU frame.
#pragma once

#include "gcs/control.hpp"
#include "gcs/geodesy.hpp"
#include "gcs/mission.hpp"
#include "gcs/terrain.hpp"
#include "gcs/vehicle.hpp"

#include <variant>
#include <vector>

namespace gcs {

struct Segment {
    EnuVector from;
    EnuVector to;

    double length() const { return (to - from).norm(); }
};

struct FixedScaling {};
struct AdaptiveScaling {
    double reference_distance_m = 50.0;
};
using OverlayScaling = std::variant<FixedScaling, AdaptiveScaling>;

inline constexpr double kMinScaleFactor = 0.5;
inline constexpr double kMaxScaleFactor = 10.0;

struct OverlaySnapshot {
    EnuVector user_ground;
    EnuVector uav_ground;       ///< terrain point below the vehicle
    EnuVector uav_air;
    Segment horizontal_line;    ///< operator's feet to the point below the vehicle
    Segment vertical_line;      ///< ground below the vehicle up to the vehicle
    double ground_distance_m = 0.0;
    double ground_speed_mps = 0.0;
    double altitude_rel_m = 0.0;  ///< takeoff-relative, as the vehicle reports it
    double vertical_speed_mps = 0.0;
    int gps_level = 0;
    double battery_pct = 0.0;
    double scale_factor = 1.0;
    bool uav_ground_fallback = false;  ///< vehicle outside terrain; datum height used
};

/// Scale factor for overlay widgets: 1 for fixed scaling, otherwise
/// ground_distance / reference_distance clamped to [0.5, 10].
double overlay_scale(const OverlayScaling &scaling, double ground_distance_m);

OverlaySnapshot compute_overlay(const UserPose &user, const VehicleState &vehicle, const HeightField &terrain,
                                const GeoReference &ref, const TakeoffDatum &datum,
                                const OverlayScaling &scaling = FixedScaling{});

/// preview_polyline() converted point-wise into `ref`.
std::vector<EnuVector> planned_path_overlay(const MissionPlan &plan, const GeoReference &ref,
                                            std::size_t samples_per_segment = 0);

/// As above, but empty unless the mission is loaded or in progress.
std::vector<EnuVector> planned_path_overlay(const MissionPlan &plan, const MissionStatus &status,
                                            const GeoReference &ref, std::size_t samples_per_segment = 0);

} // namespace gcs
