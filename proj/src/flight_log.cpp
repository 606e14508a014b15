#include "gcs/flight_log.hpp"

#include "gcs/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string_view>

namespace gcs {

namespace {

constexpr std::size_t kLogColumns = 13;
constexpr double kCohortMatchTolerance = 1e-6;
// Records within this of the closest final approach count as attaining it,
// so a vehicle settling onto the waypoint does not move T by rounding noise.
constexpr double kCompletionToleranceM = 1e-3;

// 12 digits keep latitude and longitude to well under a millimetre.
std::string format_num(double v) {
    std::array<char, 40> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.12g", v);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

double round_num(double v) { return std::strtod(format_num(v).c_str(), nullptr); }

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double field_double(std::string_view text, std::size_t line_no, std::size_t column) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ParseError("column " + std::to_string(column) + ": expected a number, got '" + std::string(text) + "'",
                         line_no);
    }
    return v;
}

std::int64_t field_int(std::string_view text, std::size_t line_no, std::size_t column) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("column " + std::to_string(column) + ": expected an integer, got '" + std::string(text) + "'",
                         line_no);
    }
    return v;
}

GeodeticPosition waypoint_target(const MissionPlan &plan, std::size_t i) { return plan.absolute_position(i); }

double compass_heading_deg(double de, double dn) {
    return normalize_heading_deg(std::atan2(de, dn) * 180.0 / std::numbers::pi);
}

} // namespace

LogRecord make_log_record(const VehicleState &vehicle, const MissionStatus &mission, bool photo_event) {
    LogRecord r;
    r.time_ms = vehicle.time_us / 1000;
    r.position = vehicle.position;
    r.alt_rel_m = vehicle.altitude_rel_m();
    r.velocity_mps = vehicle.velocity_mps;
    r.yaw_deg = vehicle.yaw_deg;
    r.gimbal_pitch_deg = vehicle.gimbal_pitch_deg;
    r.phase = vehicle.phase;
    r.mission_index = static_cast<int>(mission.current_index);
    r.photo_event = photo_event;
    return r;
}

LogRecord round_to_stored_precision(const LogRecord &r) {
    LogRecord out = r;
    out.position = {round_num(r.position.latitude_deg), round_num(r.position.longitude_deg),
                    round_num(r.position.altitude_m)};
    out.alt_rel_m = round_num(r.alt_rel_m);
    out.velocity_mps = {round_num(r.velocity_mps.east_m), round_num(r.velocity_mps.north_m),
                        round_num(r.velocity_mps.up_m)};
    out.yaw_deg = round_num(r.yaw_deg);
    out.gimbal_pitch_deg = round_num(r.gimbal_pitch_deg);
    return out;
}

void write_log(const FlightLog &log, std::ostream &out) {
    out << kLogHeader << '\n';
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto &r = log[i];
        if (i > 0 && r.time_ms <= log[i - 1].time_ms) {
            throw ValidationError("write_log: record " + std::to_string(i) + " is not after its predecessor");
        }
        out << r.time_ms << ',' << format_num(r.position.latitude_deg) << ',' << format_num(r.position.longitude_deg)
            << ',' << format_num(r.position.altitude_m) << ',' << format_num(r.alt_rel_m) << ','
            << format_num(r.velocity_mps.east_m) << ',' << format_num(r.velocity_mps.north_m) << ','
            << format_num(r.velocity_mps.up_m) << ',' << format_num(r.yaw_deg) << ',' << format_num(r.gimbal_pitch_deg)
            << ',' << to_string(r.phase) << ',' << r.mission_index << ',' << (r.photo_event ? 1 : 0) << '\n';
    }
}

void write_log_file(const FlightLog &log, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write log file '" + path + "'");
    }
    write_log(log, out);
}

FlightLog read_log(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("missing header", 1);
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kLogHeader) {
        throw ParseError("unexpected header '" + line + "'", 1);
    }
    FlightLog log;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != kLogColumns) {
            throw ParseError("row has " + std::to_string(f.size()) + " columns, expected 13", line_no);
        }
        LogRecord r;
        r.time_ms = field_int(f[0], line_no, 1);
        r.position = {field_double(f[1], line_no, 2), field_double(f[2], line_no, 3), field_double(f[3], line_no, 4)};
        r.alt_rel_m = field_double(f[4], line_no, 5);
        r.velocity_mps = {field_double(f[5], line_no, 6), field_double(f[6], line_no, 7),
                          field_double(f[7], line_no, 8)};
        r.yaw_deg = field_double(f[8], line_no, 9);
        r.gimbal_pitch_deg = field_double(f[9], line_no, 10);
        const auto phase = flight_phase_from_string(f[10]);
        if (!phase) {
            throw ParseError("column 11: unknown flight phase '" + std::string(f[10]) + "'", line_no);
        }
        r.phase = *phase;
        r.mission_index = static_cast<int>(field_int(f[11], line_no, 12));
        if (f[12] != "0" && f[12] != "1") {
            throw ParseError("column 13: photo flag must be 0 or 1", line_no);
        }
        r.photo_event = f[12] == "1";
        if (!is_valid(r.position)) {
            throw ParseError("invalid latitude/longitude", line_no);
        }
        if (!log.empty() && r.time_ms <= log.back().time_ms) {
            throw ParseError("time_ms does not increase", line_no);
        }
        log.push_back(r);
    }
    return log;
}

FlightLog read_log_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open log file '" + path + "'");
    }
    return read_log(in);
}

void ScoreConfig::validate() const {
    if (!(delta_m > 0.0) || !(delta_m <= d_max_m) || !std::isfinite(d_max_m)) {
        throw ValidationError("ScoreConfig: require 0 < delta_m <= d_max_m");
    }
}

std::vector<double> closest_distances(const FlightLog &log, const MissionPlan &plan) {
    const GeoReference frame(plan.takeoff_datum.takeoff_position);
    std::vector<EnuVector> targets;
    targets.reserve(plan.waypoints.size());
    for (std::size_t i = 0; i < plan.waypoints.size(); ++i) {
        targets.push_back(frame.to_enu(waypoint_target(plan, i)));
    }
    std::vector<double> best(targets.size(), std::numeric_limits<double>::infinity());
    for (const auto &r : log) {
        const EnuVector p = frame.to_enu(r.position);
        for (std::size_t i = 0; i < targets.size(); ++i) {
            best[i] = std::min(best[i], (p - targets[i]).norm());
        }
    }
    return best;
}

double completion_time_s(const FlightLog &log, const MissionPlan &plan) {
    if (log.empty() || plan.waypoints.empty()) {
        return 0.0;
    }
    const auto first_airborne =
        std::find_if(log.begin(), log.end(), [](const LogRecord &r) { return r.phase != FlightPhase::Grounded; });
    const std::int64_t start = first_airborne == log.end() ? log.front().time_ms : first_airborne->time_ms;

    const GeoReference frame(plan.takeoff_datum.takeoff_position);
    const EnuVector target = frame.to_enu(waypoint_target(plan, plan.waypoints.size() - 1));
    std::vector<double> d(log.size());
    std::transform(log.begin(), log.end(), d.begin(),
                   [&](const LogRecord &r) { return (frame.to_enu(r.position) - target).norm(); });
    const double best = *std::min_element(d.begin(), d.end());
    std::size_t i = 0;
    while (d[i] > best + kCompletionToleranceM) {
        ++i;
    }
    return static_cast<double>(std::max<std::int64_t>(0, log[i].time_ms - start)) / 1000.0;
}

double distance_score(double distance_m, const ScoreConfig &config) {
    return std::clamp(1.0 - distance_m / config.d_max_m, 0.0, 1.0);
}

double time_term(double t_s, double t_min_s, double t_max_s) {
    if (t_max_s == t_min_s) {
        return 1.0;
    }
    return 1.0 - (t_s - t_min_s) / (t_max_s - t_min_s);
}

double performance_score(double d_bar, double final_distance_m, double time_term_value, bool photo,
                         const ScoreConfig &config) {
    const double gate = final_distance_m < config.delta_m ? time_term_value + (photo ? 1.0 : 0.0) : 0.0;
    return (d_bar + gate) / 3.0;
}

ScoreReport score(const FlightLog &log, const MissionPlan &plan, const ScoreConfig &config,
                  std::span<const double> cohort_times_s) {
    config.validate();
    if (cohort_times_s.empty()) {
        throw ValidationError("score: cohort is empty");
    }
    if (log.empty() || plan.waypoints.empty()) {
        throw ValidationError("score: log and plan must be non-empty");
    }
    ScoreReport rep;
    rep.per_waypoint_distance_m = closest_distances(log, plan);
    rep.per_waypoint_score.reserve(rep.per_waypoint_distance_m.size());
    for (double d : rep.per_waypoint_distance_m) {
        rep.per_waypoint_score.push_back(distance_score(d, config));
    }
    rep.d_bar = std::accumulate(rep.per_waypoint_score.begin(), rep.per_waypoint_score.end(), 0.0) /
                static_cast<double>(rep.per_waypoint_score.size());
    rep.final_distance_m = rep.per_waypoint_distance_m.back();
    rep.completion_time_s = completion_time_s(log, plan);

    const auto [lo, hi] = std::minmax_element(cohort_times_s.begin(), cohort_times_s.end());
    rep.t_min_s = *lo;
    rep.t_max_s = *hi;
    const bool in_cohort = std::any_of(cohort_times_s.begin(), cohort_times_s.end(), [&](double t) {
        return std::abs(t - rep.completion_time_s) <= kCohortMatchTolerance;
    });
    if (!in_cohort) {
        throw ValidationError("score: cohort does not contain this log's completion time");
    }
    rep.time_term = std::clamp(time_term(rep.completion_time_s, rep.t_min_s, rep.t_max_s), 0.0, 1.0);
    rep.photo = std::any_of(log.begin(), log.end(), [](const LogRecord &r) { return r.photo_event; }) ? 1 : 0;
    rep.gate_passed = rep.final_distance_m < config.delta_m;
    rep.score = performance_score(rep.d_bar, rep.final_distance_m, rep.time_term, rep.photo == 1, config);
    return rep;
}

PathAnalytics analyze_track(std::span<const EnuVector> track, std::span<const double> speeds_mps, double spacing_m,
                            double turn_threshold_deg) {
    if (!(spacing_m > 0.0)) {
        throw ValidationError("analyze_path: spacing must be positive");
    }
    PathAnalytics out;
    std::vector<double> arc(track.size(), 0.0);
    for (std::size_t i = 1; i < track.size(); ++i) {
        arc[i] = arc[i - 1] + ground_distance(track[i - 1], track[i]);
    }
    if (track.size() < 2 || arc.back() <= 0.0) {
        out.degenerate = true;
        return out;
    }

    const double total = arc.back();
    std::vector<double> stations;
    for (std::size_t k = 0;; ++k) {
        const double s = static_cast<double>(k) * spacing_m;
        if (s > total) {
            break;
        }
        stations.push_back(s);
    }
    if (total - stations.back() > 1e-9 * std::max(1.0, total)) {
        stations.push_back(total);
    }

    std::size_t seg = 1;
    for (double s : stations) {
        while (seg + 1 < arc.size() && arc[seg] < s) {
            ++seg;
        }
        // Skip zero-length segments so the interpolation weight is defined.
        std::size_t lo = seg - 1;
        const double len = arc[seg] - arc[lo];
        const double t = len > 0.0 ? std::clamp((s - arc[lo]) / len, 0.0, 1.0) : 1.0;
        out.points.push_back(track[lo] + (track[seg] - track[lo]) * t);
        const std::size_t nearest = t < 0.5 ? lo : seg;
        out.speed_mps.push_back(nearest < speeds_mps.size() ? speeds_mps[nearest] : 0.0);
    }

    std::vector<double> headings;
    for (std::size_t k = 1; k < out.points.size(); ++k) {
        headings.push_back(compass_heading_deg(out.points[k].east_m - out.points[k - 1].east_m,
                                               out.points[k].north_m - out.points[k - 1].north_m));
    }

    // Turn at point k is the change from segment k-1 to segment k.
    std::size_t k = 1;
    while (k < headings.size()) {
        const double turn = heading_difference_deg(headings[k - 1], headings[k]);
        if (std::abs(turn) <= turn_threshold_deg) {
            ++k;
            continue;
        }
        HeadingMarker marker{k, 0.0};
        double sharpest = 0.0;
        while (k < headings.size()) {
            const double t = heading_difference_deg(headings[k - 1], headings[k]);
            if (std::abs(t) <= turn_threshold_deg || (marker.turn_deg != 0.0 && (t > 0.0) != (marker.turn_deg > 0.0))) {
                break;
            }
            marker.turn_deg += t;
            if (std::abs(t) > sharpest) {
                sharpest = std::abs(t);
                marker.index = k;
            }
            ++k;
        }
        out.markers.push_back(marker);
    }
    return out;
}

PathAnalytics analyze_path(const FlightLog &log, double spacing_m, double turn_threshold_deg) {
    if (log.empty()) {
        PathAnalytics out;
        out.degenerate = true;
        return out;
    }
    const GeoReference frame(log.front().position);
    std::vector<EnuVector> track;
    std::vector<double> speeds;
    track.reserve(log.size());
    speeds.reserve(log.size());
    for (const auto &r : log) {
        track.push_back(frame.to_enu(r.position));
        speeds.push_back(r.velocity_mps.horizontal_norm());
    }
    return analyze_track(track, speeds, spacing_m, turn_threshold_deg);
}

void export_plot_data(const PathAnalytics &analytics, std::ostream &out) {
    out << kPlotHeader << '\n';
    std::vector<bool> is_marker(analytics.points.size(), false);
    for (const auto &m : analytics.markers) {
        if (m.index < is_marker.size()) {
            is_marker[m.index] = true;
        }
    }
    for (std::size_t i = 0; i < analytics.points.size(); ++i) {
        const auto &p = analytics.points[i];
        out << i << ',' << format_num(p.east_m) << ',' << format_num(p.north_m) << ',' << format_num(p.up_m) << ','
            << format_num(analytics.speed_mps[i]) << ',' << (is_marker[i] ? 1 : 0) << '\n';
    }
}

} // namespace gcs
