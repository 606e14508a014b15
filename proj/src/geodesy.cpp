#include "gcs/geodesy.hpp"

#include "gcs/errors.hpp"

#include <cmath>
#include <numbers>

namespace gcs {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kLatitudeTolerance = 1e-15;
constexpr int kMaxIterations = 20;

double prime_vertical_radius(double sin_lat) {
    return wgs84::kSemiMajorAxis / std::sqrt(1.0 - wgs84::kEccentricitySq * sin_lat * sin_lat);
}

Eigen::Vector3d as_eigen(const EcefVector &v) { return {v.x_m, v.y_m, v.z_m}; }

} // namespace

double EnuVector::norm() const { return std::sqrt(east_m * east_m + north_m * north_m + up_m * up_m); }

double EnuVector::horizontal_norm() const { return std::hypot(east_m, north_m); }

bool is_valid(const GeodeticPosition &p) {
    return std::isfinite(p.latitude_deg) && std::isfinite(p.longitude_deg) &&
           std::isfinite(p.altitude_m) && p.latitude_deg >= -90.0 && p.latitude_deg <= 90.0 &&
           p.longitude_deg >= -180.0 && p.longitude_deg <= 180.0;
}

double normalize_longitude_deg(double lon_deg) {
    double wrapped = std::fmod(lon_deg + 180.0, 360.0);
    if (wrapped < 0.0) {
        wrapped += 360.0;
    }
    return wrapped - 180.0;
}

double normalize_heading_deg(double heading_deg) {
    double wrapped = std::fmod(heading_deg, 360.0);
    if (wrapped < 0.0) {
        wrapped += 360.0;
    }
    // fmod of a tiny negative value can round up to exactly 360.
    return wrapped >= 360.0 ? 0.0 : wrapped;
}

double heading_difference_deg(double from_deg, double to_deg) {
    double diff = normalize_heading_deg(to_deg - from_deg);
    return diff > 180.0 ? diff - 360.0 : diff;
}

EcefVector geodetic_to_ecef(const GeodeticPosition &p) {
    const double lat = p.latitude_deg * kDegToRad;
    const double lon = p.longitude_deg * kDegToRad;
    const double sin_lat = std::sin(lat);
    const double cos_lat = std::cos(lat);
    const double n = prime_vertical_radius(sin_lat);
    const double h = p.altitude_m;
    return {(n + h) * cos_lat * std::cos(lon), (n + h) * cos_lat * std::sin(lon),
            (n * (1.0 - wgs84::kEccentricitySq) + h) * sin_lat};
}

GeodeticPosition ecef_to_geodetic(const EcefVector &v) {
    const double p = std::hypot(v.x_m, v.y_m);
    const double z = v.z_m;
    if (p == 0.0 && z == 0.0) {
        throw NumericError("ecef_to_geodetic: position is the Earth's centre");
    }

    const double e2 = wgs84::kEccentricitySq;
    double lat = std::atan2(z, p * (1.0 - e2));
    bool converged = false;
    for (int i = 0; i < kMaxIterations; ++i) {
        const double sin_lat = std::sin(lat);
        const double n = prime_vertical_radius(sin_lat);
        const double next = std::atan2(z + e2 * n * sin_lat, p);
        const double step = std::abs(next - lat);
        lat = next;
        if (step < kLatitudeTolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NumericError("ecef_to_geodetic: latitude iteration did not converge");
    }

    const double sin_lat = std::sin(lat);
    const double cos_lat = std::cos(lat);
    // Well conditioned at every latitude, including the poles.
    const double h = p * cos_lat + z * sin_lat -
                     wgs84::kSemiMajorAxis * std::sqrt(1.0 - e2 * sin_lat * sin_lat);
    const double lon = p == 0.0 ? 0.0 : std::atan2(v.y_m, v.x_m);
    return {lat * kRadToDeg, normalize_longitude_deg(lon * kRadToDeg), h};
}

GeoReference::GeoReference(const GeodeticPosition &origin)
    : origin_(origin), origin_ecef_(geodetic_to_ecef(origin)) {
    if (!is_valid(origin)) {
        throw ValidationError("GeoReference: origin is not a valid geodetic position");
    }
    const double lat = origin.latitude_deg * kDegToRad;
    const double lon = origin.longitude_deg * kDegToRad;
    const double sl = std::sin(lat);
    const double cl = std::cos(lat);
    const double so = std::sin(lon);
    const double co = std::cos(lon);
    rotation_ << -so, co, 0.0,
                 -sl * co, -sl * so, cl,
                 cl * co, cl * so, sl;
}

EnuVector GeoReference::to_enu(const EcefVector &v) const {
    return EnuVector::from_eigen(rotation_ * (as_eigen(v) - as_eigen(origin_ecef_)));
}

EnuVector GeoReference::to_enu(const GeodeticPosition &p) const { return to_enu(geodetic_to_ecef(p)); }

EcefVector GeoReference::to_ecef(const EnuVector &v) const {
    const Eigen::Vector3d ecef = rotation_.transpose() * v.to_eigen() + as_eigen(origin_ecef_);
    return {ecef.x(), ecef.y(), ecef.z()};
}

GeodeticPosition GeoReference::to_geodetic(const EnuVector &v) const { return ecef_to_geodetic(to_ecef(v)); }

EnuVector geodetic_to_enu(const GeodeticPosition &p, const GeoReference &ref) { return ref.to_enu(p); }

GeodeticPosition enu_to_geodetic(const EnuVector &v, const GeoReference &ref) { return ref.to_geodetic(v); }

double wgs84_alt_to_takeoff_rel(double alt_wgs84_m, const TakeoffDatum &datum) {
    return alt_wgs84_m - datum.terrain_height_m;
}

double takeoff_rel_to_wgs84(double alt_rel_m, const TakeoffDatum &datum) {
    return alt_rel_m + datum.terrain_height_m;
}

double ground_distance(const EnuVector &a, const EnuVector &b) {
    return std::hypot(a.east_m - b.east_m, a.north_m - b.north_m);
}

} // namespace gcs
