// Flight recording, the `.iglog.csv` log format, mission performance
// scoring and path analytics (turn markers and speed profile).
#pragma once

#include "gcs/geodesy.hpp"
#include "gcs/mission.hpp"
#include "gcs/vehicle.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gcs {

struct LogRecord {
    std::int64_t time_ms = 0;
    GeodeticPosition position;  ///< WGS84
    double alt_rel_m = 0.0;
    EnuVector velocity_mps;
    double yaw_deg = 0.0;
    double gimbal_pitch_deg = 0.0;
    FlightPhase phase = FlightPhase::Grounded;
    int mission_index = 0;
    bool photo_event = false;

    bool operator==(const LogRecord &) const = default;
};

using FlightLog = std::vector<LogRecord>;

inline constexpr const char *kLogHeader =
    "time_ms,lat,lon,alt_wgs84,alt_rel,v_e,v_n,v_u,yaw,gimbal_pitch,phase,mission_index,photo";
inline constexpr const char *kLogExtension = ".iglog.csv";

LogRecord make_log_record(const VehicleState &vehicle, const MissionStatus &mission, bool photo_event);

/// Writes the CSV log. Floating-point fields carry twelve significant digits;
/// phase is written by name. Throws ValidationError unless times strictly
/// increase.
void write_log(const FlightLog &log, std::ostream &out);
void write_log_file(const FlightLog &log, const std::string &path);

/// Parses a CSV log written by write_log. Throws ParseError naming the
/// offending line for malformed or out-of-order rows.
FlightLog read_log(std::istream &in);
FlightLog read_log_file(const std::string &path);

/// Rounds every field to what write_log stores, so that
/// read_log(write_log(round_to_stored_precision(log))) == it.
LogRecord round_to_stored_precision(const LogRecord &r);

struct ScoreConfig {
    double delta_m = 10.0;  ///< final-waypoint pass threshold
    double d_max_m = 50.0;  ///< distance at which a waypoint scores zero

    /// Throws ValidationError unless 0 < delta_m <= d_max_m.
    void validate() const;
};

struct ScoreReport {
    std::vector<double> per_waypoint_distance_m;
    std::vector<double> per_waypoint_score;
    double d_bar = 0.0;
    double final_distance_m = 0.0;
    double completion_time_s = 0.0;
    double t_min_s = 0.0;
    double t_max_s = 0.0;
    double time_term = 0.0;
    int photo = 0;
    bool gate_passed = false;
    double score = 0.0;
};

/// Closest 3D approach of the logged track to each waypoint, measured in a
/// frame anchored at the plan's takeoff position.
std::vector<double> closest_distances(const FlightLog &log, const MissionPlan &plan);

/// Seconds from the first airborne record to the first record that comes
/// within 1 mm of the closest approach to the final waypoint.
double completion_time_s(const FlightLog &log, const MissionPlan &plan);

/// clamp(1 - d / d_max, 0, 1).
double distance_score(double distance_m, const ScoreConfig &config);

/// 1 - (T - T_min) / (T_max - T_min); 1 when the cohort has a single time.
double time_term(double t_s, double t_min_s, double t_max_s);

/// (d_bar + gate) / 3 where gate = time_term + photo when the final
/// waypoint was approached closer than delta_m, and 0 otherwise.
double performance_score(double d_bar, double final_distance_m, double time_term, bool photo,
                         const ScoreConfig &config);

/// Scores one log against `plan`. `cohort_times_s` holds the completion
/// times of every log in the cohort, including this one. Throws
/// ValidationError for an empty cohort or one that does not contain this
/// log's time.
ScoreReport score(const FlightLog &log, const MissionPlan &plan, const ScoreConfig &config,
                  std::span<const double> cohort_times_s);

struct HeadingMarker {
    std::size_t index = 0;   ///< resampled point where the turn happens
    double turn_deg = 0.0;   ///< signed, positive clockwise

    bool operator==(const HeadingMarker &) const = default;
};

struct PathAnalytics {
    std::vector<EnuVector> points;  ///< relative to the first log record
    std::vector<double> speed_mps;  ///< ground speed of the nearest log sample
    std::vector<HeadingMarker> markers;
    bool degenerate = false;        ///< the track never moved horizontally
};

/// Resamples the horizontal track at fixed arc-length spacing (the final
/// point is kept) and marks every heading change larger than the
/// threshold. Consecutive same-direction turns above the threshold form one
/// marker at the sharpest point, carrying their summed angle.
PathAnalytics analyze_path(const FlightLog &log, double spacing_m = 1.0, double turn_threshold_deg = 20.0);

/// Same, for a track already expressed in a local frame.
PathAnalytics analyze_track(std::span<const EnuVector> track, std::span<const double> speeds_mps, double spacing_m,
                            double turn_threshold_deg);

inline constexpr const char *kPlotHeader = "index,east_m,north_m,up_m,speed_mps,marker";

/// One row per resampled point: index, east, north, up, speed, marker flag.
void export_plot_data(const PathAnalytics &analytics, std::ostream &out);

} // namespace gcs
