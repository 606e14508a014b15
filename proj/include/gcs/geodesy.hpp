// WGS84 geodetic, Earth-centred Earth-fixed and local East-North-Up frames,
// plus the takeoff-relative altitude datum reported by consumer UAVs.
//
// Angles are degrees at the API boundary and radians internally. Altitude
// always means height above the WGS84 ellipsoid unless a name says otherwise.
#pragma once

#include <Eigen/Core>

namespace gcs {

namespace wgs84 {
inline constexpr double kSemiMajorAxis = 6378137.0;
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kSemiMinorAxis = kSemiMajorAxis * (1.0 - kFlattening);
inline constexpr double kEccentricitySq = kFlattening * (2.0 - kFlattening);
} // namespace wgs84

struct GeodeticPosition {
    double latitude_deg = 0.0;  ///< [-90, 90]
    double longitude_deg = 0.0; ///< [-180, 180)
    double altitude_m = 0.0;    ///< above the ellipsoid

    bool operator==(const GeodeticPosition &) const = default;
};

struct EcefVector {
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;

    bool operator==(const EcefVector &) const = default;
};

/// East-North-Up offset (or velocity, in m/s) relative to a GeoReference.
struct EnuVector {
    double east_m = 0.0;
    double north_m = 0.0;
    double up_m = 0.0;

    bool operator==(const EnuVector &) const = default;

    EnuVector &operator+=(const EnuVector &o) {
        east_m += o.east_m;
        north_m += o.north_m;
        up_m += o.up_m;
        return *this;
    }
    EnuVector &operator-=(const EnuVector &o) {
        east_m -= o.east_m;
        north_m -= o.north_m;
        up_m -= o.up_m;
        return *this;
    }
    EnuVector &operator*=(double s) {
        east_m *= s;
        north_m *= s;
        up_m *= s;
        return *this;
    }

    double norm() const;
    double horizontal_norm() const;

    Eigen::Vector3d to_eigen() const { return {east_m, north_m, up_m}; }
    static EnuVector from_eigen(const Eigen::Vector3d &v) { return {v.x(), v.y(), v.z()}; }
};

inline EnuVector operator+(EnuVector a, const EnuVector &b) { return a += b; }
inline EnuVector operator-(EnuVector a, const EnuVector &b) { return a -= b; }
inline EnuVector operator*(EnuVector a, double s) { return a *= s; }
inline EnuVector operator*(double s, EnuVector a) { return a *= s; }

/// True when latitude is within [-90, 90], longitude within [-180, 180] and
/// every component is finite.
bool is_valid(const GeodeticPosition &p);

/// Wraps a longitude into [-180, 180).
double normalize_longitude_deg(double lon_deg);

/// Wraps a heading into [0, 360).
double normalize_heading_deg(double heading_deg);

/// Signed shortest rotation from `from_deg` to `to_deg`, in (-180, 180].
double heading_difference_deg(double from_deg, double to_deg);

EcefVector geodetic_to_ecef(const GeodeticPosition &p);

/// Inverse of geodetic_to_ecef. Refines latitude by fixed-point iteration
/// until successive estimates differ by less than 1e-12 rad; throws
/// NumericError after 20 iterations or for the Earth's centre.
GeodeticPosition ecef_to_geodetic(const EcefVector &v);

/// A local tangent frame anchored at a fixed geodetic origin.
class GeoReference {
public:
    explicit GeoReference(const GeodeticPosition &origin);

    const GeodeticPosition &origin() const noexcept { return origin_; }
    const EcefVector &origin_ecef() const noexcept { return origin_ecef_; }

    /// Rotation taking ECEF offsets into ENU components.
    const Eigen::Matrix3d &ecef_to_enu_rotation() const noexcept { return rotation_; }

    EnuVector to_enu(const GeodeticPosition &p) const;
    EnuVector to_enu(const EcefVector &v) const;
    GeodeticPosition to_geodetic(const EnuVector &v) const;
    EcefVector to_ecef(const EnuVector &v) const;

private:
    GeodeticPosition origin_;
    EcefVector origin_ecef_;
    Eigen::Matrix3d rotation_;
};

EnuVector geodetic_to_enu(const GeodeticPosition &p, const GeoReference &ref);
GeodeticPosition enu_to_geodetic(const EnuVector &v, const GeoReference &ref);

/// Ground elevation at the takeoff point. Altitudes exchanged with the
/// vehicle are relative to `terrain_height_m`.
struct TakeoffDatum {
    GeodeticPosition takeoff_position;
    double terrain_height_m = 0.0;

    bool operator==(const TakeoffDatum &) const = default;
};

double wgs84_alt_to_takeoff_rel(double alt_wgs84_m, const TakeoffDatum &datum);
double takeoff_rel_to_wgs84(double alt_rel_m, const TakeoffDatum &datum);

/// Horizontal distance between two local positions; the up component is ignored.
double ground_distance(const EnuVector &a, const EnuVector &b);

} // namespace gcs
