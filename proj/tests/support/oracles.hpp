// Reference computations that share no code with the library: their own
// CSV reading, their own WGS84 formulas in long double, brute force
// everywhere.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace gcs::oracle {

using Vec3 = std::array<long double, 3>;

inline Vec3 ecef(long double lat_deg, long double lon_deg, long double h) {
    const long double a = 6378137.0L;
    const long double f = 1.0L / 298.257223563L;
    const long double e2 = f * (2.0L - f);
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double lat = lat_deg * pi / 180.0L;
    const long double lon = lon_deg * pi / 180.0L;
    const long double n = a / std::sqrt(1.0L - e2 * std::sin(lat) * std::sin(lat));
    return {(n + h) * std::cos(lat) * std::cos(lon), (n + h) * std::cos(lat) * std::sin(lon),
            (n * (1.0L - e2) + h) * std::sin(lat)};
}

inline long double dist(const Vec3 &p, const Vec3 &q) {
    const long double dx = p[0] - q[0];
    const long double dy = p[1] - q[1];
    const long double dz = p[2] - q[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct Row {
    long long time_ms = 0;
    long double lat = 0, lon = 0, alt = 0, alt_rel = 0;
    std::string phase;
    int photo = 0;
};

/// Reads the columns the score needs from log CSV text.
inline std::vector<Row> parse_log(const std::string &text) {
    std::vector<Row> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            f.push_back(cell);
        }
        Row r;
        r.time_ms = std::atoll(f.at(0).c_str());
        r.lat = std::strtold(f.at(1).c_str(), nullptr);
        r.lon = std::strtold(f.at(2).c_str(), nullptr);
        r.alt = std::strtold(f.at(3).c_str(), nullptr);
        r.alt_rel = std::strtold(f.at(4).c_str(), nullptr);
        r.phase = f.at(10);
        r.photo = std::atoi(f.at(12).c_str());
        rows.push_back(r);
    }
    return rows;
}

struct Waypoint {
    long double lat = 0, lon = 0, alt_rel = 0;
};

struct Score {
    std::vector<long double> distances;
    long double d_bar = 0;
    long double final_distance = 0;
    long double time_s = 0;
    int photo = 0;
    long double score = 0;
};

/// Datum height taken from the first row as alt_wgs84 - alt_rel.
inline long double datum_height(const std::vector<Row> &rows) { return rows.front().alt - rows.front().alt_rel; }

inline long double completion_time(const std::vector<Row> &rows, const std::vector<Waypoint> &wps) {
    const long double datum = datum_height(rows);
    const Waypoint &last = wps.back();
    const Vec3 target = ecef(last.lat, last.lon, datum + last.alt_rel);
    long long start = rows.front().time_ms;
    for (const auto &r : rows) {
        if (r.phase != "Grounded") {
            start = r.time_ms;
            break;
        }
    }
    std::vector<long double> d;
    for (const auto &r : rows) {
        d.push_back(dist(ecef(r.lat, r.lon, r.alt), target));
    }
    const long double best = *std::min_element(d.begin(), d.end());
    long long end = rows.front().time_ms;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (d[i] <= best + 1e-3L) {
            end = rows[i].time_ms;
            break;
        }
    }
    return static_cast<long double>(std::max(0LL, end - start)) / 1000.0L;
}

inline Score score(const std::vector<Row> &rows, const std::vector<Waypoint> &wps, long double delta,
                   long double d_max, long double t_min, long double t_max) {
    Score s;
    const long double datum = datum_height(rows);
    long double sum = 0;
    for (const auto &w : wps) {
        const Vec3 target = ecef(w.lat, w.lon, datum + w.alt_rel);
        long double best = std::numeric_limits<long double>::infinity();
        for (const auto &r : rows) {
            best = std::min(best, dist(ecef(r.lat, r.lon, r.alt), target));
        }
        s.distances.push_back(best);
        sum += std::clamp(1.0L - best / d_max, 0.0L, 1.0L);
    }
    s.d_bar = sum / static_cast<long double>(wps.size());
    s.final_distance = s.distances.back();
    s.time_s = completion_time(rows, wps);
    s.photo = std::any_of(rows.begin(), rows.end(), [](const Row &r) { return r.photo == 1; }) ? 1 : 0;
    long double gate = 0;
    if (s.final_distance < delta) {
        const long double tt = t_max == t_min ? 1.0L : 1.0L - (s.time_s - t_min) / (t_max - t_min);
        gate = tt + s.photo;
    }
    s.score = (s.d_bar + gate) / 3.0L;
    return s;
}

} // namespace gcs::oracle
