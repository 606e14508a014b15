// Acceptance run: one PASS/FAIL line per criterion. Exits non-zero when any
// criterion fails.
#include "gcs/control.hpp"
#include "gcs/flight_log.hpp"
#include "gcs/geodesy.hpp"
#include "gcs/mission.hpp"
#include "gcs/protocol.hpp"
#include "gcs/server/scenario.hpp"
#include "gcs/server/script.hpp"
#include "gcs/server/simulation.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/sim_helpers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace gcs;
using namespace gcs::protocol;
using gcs::testsim::at;
using gcs::testsim::ball;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("violated: ") + what;
        }
    }
    void note(const std::string &s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double ecef_gap(const GeodeticPosition &a, const GeodeticPosition &b) {
    const auto p = geodetic_to_ecef(a);
    const auto q = geodetic_to_ecef(b);
    return std::hypot(p.x_m - q.x_m, p.y_m - q.y_m, p.z_m - q.z_m);
}

std::string log_text(const FlightLog &log) {
    std::ostringstream out;
    write_log(log, out);
    return out.str();
}

Script task_a_script() { return load_script_file(testsim::scenario_path("task_a.script.json")); }

// --- score formula -------------------------------------------------------

Outcome score_formula() {
    Outcome o;
    const ScoreConfig cfg;
    const double s1 = performance_score(0.6, 15.0, 1.0, true, cfg);
    const double s2 = performance_score(0.9, 3.0, 1.0, true, cfg);
    o.require(std::abs(s1 - 0.2) <= 1e-9, "example S = 0.2");
    o.require(std::abs(s2 - 2.9 / 3.0) <= 1e-9, "example S = 2.9/3");
    o.note("examples " + fmt("%.12f", s1) + ", " + fmt("%.12f", s2));

    // Simulator-generated cohort: perturbed Task-A plans at varying speeds,
    // some cut short by an early return-home.
    const auto base_scenario = testsim::study_scenario();
    const auto terrain = build_terrain(base_scenario);
    const auto base_plan = load_plan_file(testsim::scenario_path("task_a.plan.json"));
    testgen::Rng rng(2024);
    constexpr int kLogs = 24;
    std::vector<std::string> texts;
    std::vector<PlanFile> plans;
    int uploads_ok = 0;
    for (int k = 0; k < kLogs; ++k) {
        Scenario scenario = base_scenario;
        scenario.mission_speed_mps = 3.0 + 0.25 * k;
        const GeoReference frame(base_plan.waypoints.front().position);
        WaypointUpload up;
        PlanFile pf;
        pf.speed_mps = scenario.mission_speed_mps;
        for (const auto &w : base_plan.waypoints) {
            Waypoint moved = w;
            auto enu = frame.to_enu(GeodeticPosition{w.position.latitude_deg, w.position.longitude_deg, 0.0});
            enu += EnuVector{rng.uniform(-3, 3), rng.uniform(-3, 3), 0.0};
            const auto g = frame.to_geodetic(enu);
            moved.position = {g.latitude_deg, g.longitude_deg, w.position.altitude_m + rng.uniform(0, 4)};
            up.waypoints.push_back(to_wire(moved));
            pf.waypoints.push_back(to_waypoint(up.waypoints.back()));
        }
        Script script;
        script.duration_s = 150.0;
        const double rth = k % 6 == 5 ? 40.0 : 140.0;
        script.events = {at(0.0, testsim::kTakeoff), at(1.0, up), at(8.0, testsim::kStart),
                         at(rth, testsim::kReturnHome)};
        const auto result = run_script(scenario, terrain, script);
        const bool failed = std::any_of(result.acks.begin(), result.acks.end(),
                                        [](const ScriptAck &a) { return a.ack.code != AckCode::Ok; });
        uploads_ok += failed ? 0 : 1;
        texts.push_back(log_text(result.log));
        plans.push_back(pf);
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<FlightLog> logs;
    std::vector<MissionPlan> mplans;
    std::vector<double> times;
    for (int k = 0; k < kLogs; ++k) {
        std::istringstream in(texts[static_cast<std::size_t>(k)]);
        logs.push_back(read_log(in));
        mplans.push_back(plan_for_log(plans[static_cast<std::size_t>(k)], logs.back()));
        times.push_back(completion_time_s(logs.back(), mplans.back()));
    }
    std::vector<ScoreReport> reports;
    for (int k = 0; k < kLogs; ++k) {
        reports.push_back(score(logs[static_cast<std::size_t>(k)], mplans[static_cast<std::size_t>(k)],
                                base_scenario.score, times));
    }
    const double runtime = seconds_since(t0);

    std::vector<std::vector<oracle::Row>> rows;
    std::vector<std::vector<oracle::Waypoint>> owps;
    std::vector<long double> otimes;
    for (int k = 0; k < kLogs; ++k) {
        rows.push_back(oracle::parse_log(texts[static_cast<std::size_t>(k)]));
        owps.emplace_back();
        for (const auto &w : plans[static_cast<std::size_t>(k)].waypoints) {
            owps.back().push_back({w.position.latitude_deg, w.position.longitude_deg, w.position.altitude_m});
        }
        otimes.push_back(oracle::completion_time(rows.back(), owps.back()));
    }
    const long double ot_min = *std::min_element(otimes.begin(), otimes.end());
    const long double ot_max = *std::max_element(otimes.begin(), otimes.end());
    double worst = 0.0;
    int gated = 0;
    for (int k = 0; k < kLogs; ++k) {
        const auto s = oracle::score(rows[static_cast<std::size_t>(k)], owps[static_cast<std::size_t>(k)],
                                     base_scenario.score.delta_m, base_scenario.score.d_max_m, ot_min, ot_max);
        worst = std::max(worst, std::abs(static_cast<double>(s.score) - reports[static_cast<std::size_t>(k)].score));
        gated += reports[static_cast<std::size_t>(k)].gate_passed ? 1 : 0;
    }
    o.require(uploads_ok == kLogs, "every perturbed plan accepted");
    o.require(worst <= 1e-9, "oracle agreement within 1e-9");
    o.require(gated > 0 && gated < kLogs, "cohort mixes gated and ungated logs");
    o.note(std::to_string(kLogs) + " simulator logs, max |S - oracle| " + fmt("%.2e", worst) + ", " +
           std::to_string(gated) + " gated");

    // Final approach of 10.001 m.
    const GeodeticPosition takeoff{51.03, 13.73, 220.0};
    const GeoReference tf(takeoff);
    MissionPlan plan;
    plan.takeoff_datum = {takeoff, takeoff.altitude_m};
    Waypoint w;
    w.position = tf.to_geodetic({0, 0, 30});
    w.position.altitude_m = 30;
    plan.waypoints = {w};
    LogRecord r;
    r.position = tf.to_geodetic({0, 10.001, 30});
    r.alt_rel_m = 30;
    r.phase = FlightPhase::Mission;
    r.photo_event = true;
    const auto far = score({r}, plan, {}, std::vector<double>{0.0});
    o.require(!far.gate_passed && std::abs(far.score - far.d_bar / 3.0) <= 1e-12, "10.001 m final approach has zero gate");
    o.note("10.001 m gate " + std::to_string(far.gate_passed ? 1 : 0));

    o.require(runtime < 1.0, "runtime < 1 s");
    o.note("scoring runtime " + fmt("%.3f", runtime) + " s");
    return o;
}

// --- geodesy ---------------------------------------------------------------

Outcome geodesy_round_trips() {
    Outcome o;
    testgen::Rng rng(7);
    const auto t0 = std::chrono::steady_clock::now();
    double worst_ecef = 0.0;
    double worst_enu = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto p = testgen::geodetic(rng);
        worst_ecef = std::max(worst_ecef, ecef_gap(ecef_to_geodetic(geodetic_to_ecef(p)), p));

        GeodeticPosition origin = testgen::geodetic(rng, -100.0, 3000.0);
        origin.latitude_deg = std::clamp(origin.latitude_deg, -89.0, 89.0);
        const GeoReference ref(origin);
        const auto q = testgen::near(rng, origin, 20000.0, -200.0, 5000.0);
        worst_enu = std::max(worst_enu, ecef_gap(ref.to_geodetic(ref.to_enu(q)), q));
    }
    const double runtime = seconds_since(t0);
    o.require(worst_ecef < 1e-6, "ECEF round trip < 1e-6 m");
    o.require(worst_enu < 1e-6, "ENU round trip < 1e-6 m");
    o.require(runtime < 5.0, "runtime < 5 s");
    o.note("1e4 points, max ECEF error " + fmt("%.2e", worst_ecef) + " m, max ENU error " + fmt("%.2e", worst_enu) +
           " m, " + fmt("%.3f", runtime) + " s");
    return o;
}

// --- control law -------------------------------------------------------------

EnuVector rotate_compass(const EnuVector &v, double deg) {
    const double t = deg * std::numbers::pi / 180.0;
    return {v.east_m * std::cos(t) + v.north_m * std::sin(t), -v.east_m * std::sin(t) + v.north_m * std::cos(t),
            v.up_m};
}

Outcome control_law() {
    Outcome o;
    const VehicleParams limits;
    const ControlParams params;
    const ArcState arc;
    auto drive = [&](const Eigen::Vector3d &d, ControlFrame frame, double yaw, double heading) {
        UserPose user;
        user.heading_deg = heading;
        return ball_to_command(clamp_ball(d), arc, frame, yaw, user, params, limits);
    };
    testgen::Rng rng(11);
    double worst_equiv = 0.0;
    double worst_rot = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto d = testgen::ball(rng);
        const double yaw = rng.uniform(0, 360);
        const auto a = drive(d, ControlFrame::DroneCentric, yaw, rng.uniform(0, 360));
        const auto b = drive(d, ControlFrame::UserCentric, rng.uniform(0, 360), yaw);
        worst_equiv = std::max(worst_equiv, (a.velocity_mps - b.velocity_mps).norm());
        const double turn = rng.uniform(-360, 360);
        const auto r = drive(d, ControlFrame::DroneCentric, yaw + turn, 0.0);
        worst_rot = std::max(worst_rot, (r.velocity_mps - rotate_compass(a.velocity_mps, turn)).norm());
    }
    o.require(worst_equiv <= 1e-9, "frame equivalence within 1e-9");
    o.require(worst_rot <= 1e-9, "rotation equivariance within 1e-9");
    o.note("1e4 inputs, max frame gap " + fmt("%.2e", worst_equiv) + ", max rotation gap " + fmt("%.2e", worst_rot));
    return o;
}

// --- Task A --------------------------------------------------------------------

Outcome task_a() {
    Outcome o;
    const auto scenario = testsim::study_scenario();
    const auto terrain = build_terrain(scenario);
    o.require(std::abs(terrain.width_m() - 100.0) < 1e-9 && std::abs(terrain.depth_m() - 250.0) < 1e-9,
              "terrain 100 x 250 m");
    o.require(std::abs(terrain.min_height() - 215.0) < 1e-9 && std::abs(terrain.max_height() - 310.0) < 1e-9,
              "terrain heights 215..310 m");

    const auto t0 = std::chrono::steady_clock::now();
    const auto result = run_script(scenario, terrain, task_a_script());
    const double runtime = seconds_since(t0);

    const auto plan = plan_for_log(load_plan_file(testsim::scenario_path("task_a.plan.json")), result.log);
    const auto dist = closest_distances(result.log, plan);
    const double worst = *std::max_element(dist.begin(), dist.end());
    const auto photos = std::count_if(result.log.begin(), result.log.end(), [](const LogRecord &r) { return r.photo_event; });
    const bool crashed = std::any_of(result.log.begin(), result.log.end(),
                                     [](const LogRecord &r) { return r.phase == FlightPhase::Crashed; });
    // The script ends with a return-home, so completion shows up as the mission
    // reaching its last waypoint before that.
    const bool reached_all = std::any_of(result.log.begin(), result.log.end(), [&](const LogRecord &r) {
        return r.mission_index == static_cast<int>(plan.waypoints.size()) - 1;
    });
    o.require(reached_all && !crashed, "mission flown to the last waypoint without a crash");
    o.require(worst <= 2.5, "closest approach <= 2.5 m at every waypoint");
    o.require(photos == 1, "exactly one photo");
    o.require(runtime < 5.0, "wall clock < 5 s");
    o.note(std::to_string(dist.size()) + " waypoints, worst closest approach " + fmt("%.3f", worst) + " m, photos " +
           std::to_string(photos) + ", " + fmt("%.3f", runtime) + " s");
    return o;
}

// --- Task B --------------------------------------------------------------------

double compass_of(const EnuVector &v) {
    return normalize_heading_deg(std::atan2(v.east_m, v.north_m) * 180.0 / std::numbers::pi);
}

Outcome task_b() {
    Outcome o;
    const auto scenario = testsim::study_scenario();
    const auto terrain = build_terrain(scenario);
    // The operator stands south of the vehicle facing north: left is west and
    // pulling toward the operator is south.
    const auto u = ControlFrame::UserCentric;
    Script script;
    script.duration_s = 28.0;
    script.events = {at(0.0, testsim::kTakeoff),       at(6.0, ball(u, 0.0F, 0.6F, 0.0F)),
                     at(9.0, ball(u, 0.0F, 0.0F, 0.0F)), at(11.0, ball(u, -0.6F, 0.0F, 0.0F)),
                     at(14.0, ball(u, 0.0F, 0.0F, 0.0F)), at(18.0, ball(u, 0.0F, 0.0F, -0.6F)),
                     at(21.0, ball(u, 0.0F, 0.0F, 0.0F))};
    const auto result = run_script(scenario, terrain, script);
    const auto &log = result.log;
    const bool clean = std::all_of(result.acks.begin(), result.acks.end(),
                                   [](const ScriptAck &a) { return a.ack.code == AckCode::Ok; });
    o.require(!log.empty() && clean, "script ran without error acks");
    if (log.empty()) {
        return o;
    }

    const GeoReference frame(log.front().position);
    auto pos_at = [&](double t_s) {
        const auto ms = static_cast<std::int64_t>(std::llround(t_s * 1000.0));
        const auto it = std::find_if(log.begin(), log.end(), [ms](const LogRecord &r) { return r.time_ms >= ms; });
        return frame.to_enu((it == log.end() ? log.back() : *it).position);
    };
    const auto leg1 = pos_at(18.0) - pos_at(11.0);
    const auto leg2 = pos_at(28.0) - pos_at(18.0);
    const double h1 = compass_of(leg1);
    const double h2 = compass_of(leg2);
    const double e1 = std::abs(heading_difference_deg(270.0, h1));
    const double e2 = std::abs(heading_difference_deg(180.0, h2));
    o.require(leg1.horizontal_norm() > 5.0 && e1 <= 15.0, "left leg heads west within 15 deg");
    o.require(leg2.horizontal_norm() > 5.0 && e2 <= 15.0, "pull leg heads south within 15 deg");

    const auto a = analyze_path(log, 1.0, 20.0);
    const auto interior = std::count_if(a.markers.begin(), a.markers.end(), [&](const HeadingMarker &m) {
        return m.index > 0 && m.index + 1 < a.points.size() && std::abs(m.turn_deg) > 20.0;
    });
    o.require(interior == 1 && a.markers.size() == 1, "exactly one interior heading-change marker");
    o.note("legs " + fmt("%.1f", leg1.horizontal_norm()) + " m @ " + fmt("%.1f", h1) + " deg, " +
           fmt("%.1f", leg2.horizontal_norm()) + " m @ " + fmt("%.1f", h2) + " deg; markers " +
           std::to_string(a.markers.size()) +
           (a.markers.empty() ? std::string() : ", turn " + fmt("%.1f", a.markers.front().turn_deg) + " deg"));
    return o;
}

// --- codec -----------------------------------------------------------------------

Outcome codec() {
    Outcome o;
    testgen::Rng rng(99);
    int round_trip_failures = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto m = testgen::message(rng);
        const auto bytes = encode(m);
        const auto back = decode(bytes);
        if (bytes.size() != encoded_size(m) || !std::holds_alternative<Message>(back) || std::get<Message>(back) != m) {
            ++round_trip_failures;
        }
    }
    o.require(round_trip_failures == 0, "1e4 round trips exact");

    const auto t0 = std::chrono::steady_clock::now();
    int fuzz_throws = 0;
    int fuzz_decoded = 0;
    Bytes buf;
    for (int i = 0; i < 1000000; ++i) {
        buf.resize(static_cast<std::size_t>(rng.integer(0, 80)));
        for (auto &b : buf) {
            b = rng.byte();
        }
        if (!buf.empty() && rng.coin(0.7)) {
            buf[0] = static_cast<std::uint8_t>(rng.integer(1, 8));
        }
        try {
            fuzz_decoded += std::holds_alternative<Message>(decode(buf)) ? 1 : 0;
        } catch (...) {
            ++fuzz_throws;
        }
    }
    const double fuzz_s = seconds_since(t0);
    o.require(fuzz_throws == 0, "fuzzed decode never throws");

    bool channels_ok = true;
    for (int tag = 0x01; tag <= 0x08; ++tag) {
        const auto type = static_cast<MessageType>(tag);
        const auto want = type == MessageType::Telemetry ? ChannelClass::LossyLowLatency : ChannelClass::ReliableOrdered;
        channels_ok = channels_ok && channel_of(type) == want;
    }
    for (int i = 0; i < 1000; ++i) {
        const auto m = testgen::message(rng);
        channels_ok = channels_ok && channel_of(m) == channel_of(type_of(m));
    }
    o.require(channels_ok, "channel classes: telemetry lossy, all others reliable");

    // Field-by-field sums of the wire layouts.
    const std::size_t telemetry = 1 + 4 + 8 + 3 * 8 + 6 * 4 + 5;
    WaypointUpload one{{WireWaypoint{}}};
    WaypointUpload many;
    many.waypoints.assign(kMaxUploadWaypoints, WireWaypoint{});
    const bool lengths = encode(Telemetry{}).size() == telemetry && telemetry == 66 &&
                         encode(ControlInput{}).size() == 22 && encode(one).size() == 2 + 29 &&
                         encode(many).size() == 2 + 29 * kMaxUploadWaypoints &&
                         encode(MissionCommand{}).size() == 2 && encode(VehicleCommand{}).size() == 2 &&
                         encode(SafetyOverride{}).size() == 2 && encode(UserPoseMsg{}).size() == 29 &&
                         encode(Ack{}).size() == 3;
    o.require(lengths, "layout lengths 66/22/2+29n/2/2/2/29/3");
    o.note("1e4 round trips, 1e6 fuzz decodes (" + std::to_string(fuzz_decoded) + " valid, " +
           fmt("%.2f", fuzz_s) + " s), 8 channel classes, layout lengths checked");
    return o;
}

// --- telemetry rate ----------------------------------------------------------------

Outcome telemetry_rate() {
    Outcome o;
    const auto scenario = testsim::study_scenario();
    const auto terrain = build_terrain(scenario);
    Simulation sim(scenario, terrain);
    sim.handle(testsim::kTakeoff);
    const auto ticks = static_cast<int>(std::llround(60.0 * scenario.tick_hz));
    std::vector<std::uint32_t> seqs;
    for (int i = 0; i < ticks; ++i) {
        if (i == 500) {
            sim.handle(ball(ControlFrame::DroneCentric, 0.0F, 0.0F, -0.5F));
        }
        const auto r = sim.tick();
        if (r.telemetry) {
            seqs.push_back(r.telemetry->seq);
        }
    }
    bool increasing = true;
    for (std::size_t i = 1; i < seqs.size(); ++i) {
        increasing = increasing && seqs[i] > seqs[i - 1];
    }
    const auto n = static_cast<long>(seqs.size());
    o.require(std::abs(n - 600) <= 1, "600 +- 1 frames");
    o.require(increasing, "strictly increasing seq");
    o.note(std::to_string(n) + " frames in 60 s of simulated time");
    return o;
}

// --- determinism ---------------------------------------------------------------------

Outcome determinism() {
    Outcome o;
    const auto scenario = testsim::study_scenario();
    const auto terrain = build_terrain(scenario);
    const auto script = task_a_script();
    const auto a = log_text(run_script(scenario, terrain, script).log);
    const auto b = log_text(run_script(scenario, terrain, script).log);
    o.require(a == b, "byte-identical logs");
    o.note(std::to_string(a.size()) + " bytes per log");
    return o;
}

// --- analytics -----------------------------------------------------------------------

std::vector<EnuVector> line(const EnuVector &a, const EnuVector &b, double step) {
    std::vector<EnuVector> out;
    const auto n = static_cast<std::size_t>(std::ceil((b - a).norm() / step));
    for (std::size_t k = 0; k <= n; ++k) {
        out.push_back(a + (b - a) * (static_cast<double>(k) / static_cast<double>(n)));
    }
    return out;
}

Outcome analytics() {
    Outcome o;
    std::vector<EnuVector> square;
    const std::vector<EnuVector> corners = {{0, 0, 30}, {0, 20, 30}, {20, 20, 30}, {20, 0, 30}, {0, 0, 30}};
    for (std::size_t c = 0; c + 1 < corners.size(); ++c) {
        auto leg = line(corners[c], corners[c + 1], 0.25);
        square.insert(square.end(), c == 0 ? leg.begin() : leg.begin() + 1, leg.end());
    }
    const auto ref = analyze_track(square, {}, 1.0, 20.0);
    bool square_ok = ref.markers.size() == 3;
    for (const auto &m : ref.markers) {
        square_ok = square_ok && std::abs(m.turn_deg - 90.0) <= 2.0;
    }
    o.require(square_ok, "square gives 3 markers of 90 +- 2 deg");

    const auto straight = analyze_track(line({0, 0, 0}, {30, 40, 0}, 0.37), {}, 1.0, 20.0);
    o.require(straight.markers.empty(), "straight line gives no marker");

    testgen::Rng rng(5);
    bool invariant = true;
    for (int i = 0; i < 36; ++i) {
        const double t = rng.uniform(0, 360) * std::numbers::pi / 180.0;
        std::vector<EnuVector> turned;
        for (const auto &p : square) {
            turned.push_back({p.east_m * std::cos(t) - p.north_m * std::sin(t),
                              p.east_m * std::sin(t) + p.north_m * std::cos(t), p.up_m});
        }
        const auto r = analyze_track(turned, {}, 1.0, 20.0);
        invariant = invariant && r.markers.size() == ref.markers.size();
        for (std::size_t k = 0; invariant && k < r.markers.size(); ++k) {
            invariant = r.markers[k].index == ref.markers[k].index &&
                        std::abs(r.markers[k].turn_deg - ref.markers[k].turn_deg) <= 1e-6;
        }
    }
    o.require(invariant, "markers invariant under rotation");
    std::string turns;
    for (const auto &m : ref.markers) {
        turns += (turns.empty() ? "" : "/") + fmt("%.2f", m.turn_deg);
    }
    o.note("square turns " + turns + " deg, straight " + std::to_string(straight.markers.size()) +
           " markers, 36 rotations");
    return o;
}

// --- validation ------------------------------------------------------------------------

HeightField ridge_field(const GeodeticPosition &origin) {
    constexpr std::size_t cols = 101;
    constexpr std::size_t rows = 251;
    std::vector<double> h;
    for (std::size_t r = 0; r < rows; ++r) {
        const double n = static_cast<double>(rows - 1 - r);
        for (std::size_t c = 0; c < cols; ++c) {
            h.push_back(200.0 + 60.0 * std::exp(-std::pow((n - 125.0) / 10.0, 2)));
        }
    }
    return HeightField(origin, 1.0, cols, rows, h);
}

WireWaypoint wire_at(const HeightField &f, double e, double n, double alt_rel) {
    const auto p = f.local_to_geodetic(e, n);
    return {p.latitude_deg, p.longitude_deg, static_cast<float>(alt_rel), 0.0F, -30.0F, false};
}

bool hover(Simulation &sim) {
    sim.handle(testsim::kTakeoff);
    for (int i = 0; i < 2000 && sim.vehicle().phase != FlightPhase::Hovering; ++i) {
        sim.tick();
    }
    return sim.vehicle().phase == FlightPhase::Hovering;
}

Outcome validation() {
    Outcome o;
    const auto scenario = testsim::study_scenario();
    const auto terrain = build_terrain(scenario);
    testgen::Rng rng(31);

    int accepted = 0;
    int rejected = 0;
    int completed = 0;
    int crashed = 0;
    while (accepted < 100 && rejected < 10000) {
        WaypointUpload up;
        const int n = rng.integer(1, 5);
        for (int i = 0; i < n; ++i) {
            auto w = wire_at(terrain, rng.uniform(5, 95), rng.uniform(5, 245), rng.uniform(10, 130));
            w.heading = rng.uniform_f(0.0F, 359.0F);
            w.cam_pitch = rng.uniform_f(-90.0F, 0.0F);
            up.waypoints.push_back(w);
        }
        up.waypoints[static_cast<std::size_t>(rng.integer(0, n - 1))].camera = rng.coin();

        Simulation sim(scenario, terrain);
        if (!hover(sim)) {
            o.require(false, "vehicle reaches hover");
            break;
        }
        if (sim.handle(up).code != AckCode::Ok) {
            ++rejected;
            continue;
        }
        ++accepted;
        sim.handle(testsim::kStart);
        bool hit = false;
        for (int i = 0; i < 60000 && sim.mission().state == MissionState::Running; ++i) {
            sim.tick();
            hit = hit || sim.vehicle().phase == FlightPhase::Crashed;
        }
        completed += sim.mission().state == MissionState::Completed ? 1 : 0;
        crashed += hit ? 1 : 0;
    }
    o.require(accepted == 100, "100 accepted random plans");
    o.require(completed == accepted && crashed == 0, "accepted plans complete without a crash");

    // Plans that cross a 60 m ridge below its crest with both ends well clear.
    const auto ridge = ridge_field({51.03, 13.73, 0.0});
    int ridge_rejected = 0;
    int segment_flagged = 0;
    for (int k = 0; k < 20; ++k) {
        WaypointUpload up;
        up.waypoints = {wire_at(ridge, rng.uniform(10, 90), rng.uniform(60, 100), rng.uniform(10, 45)),
                        wire_at(ridge, rng.uniform(10, 90), rng.uniform(150, 240), rng.uniform(10, 45))};
        Simulation sim(scenario, ridge);
        if (!hover(sim)) {
            break;
        }
        ridge_rejected += sim.handle(up).code == AckCode::ValidationFailed ? 1 : 0;

        MissionPlan plan;
        plan.takeoff_datum = sim.vehicle().datum;
        for (const auto &w : up.waypoints) {
            plan.waypoints.push_back(to_waypoint(w));
        }
        const auto report = validate_plan(plan, ridge, scenario.clearance_m);
        segment_flagged += std::any_of(report.violations.begin(), report.violations.end(), [](const Violation &v) {
            return v.kind == ViolationKind::SegmentTooLow;
        }) ? 1 : 0;
    }
    o.require(ridge_rejected == 20 && segment_flagged == 20, "20 ridge-crossing plans rejected");
    o.note(std::to_string(accepted) + " accepted (" + std::to_string(rejected) + " rejected while sampling), " +
           std::to_string(completed) + " completed, " + std::to_string(crashed) + " crashed; ridge plans rejected " +
           std::to_string(ridge_rejected) + "/20");
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"score formula fidelity", score_formula},
        {"geodesy round trips", geodesy_round_trips},
        {"control law frame properties", control_law},
        {"Task A scripted mission", task_a},
        {"Task B user-centric path", task_b},
        {"protocol codec", codec},
        {"telemetry rate", telemetry_rate},
        {"simulation determinism", determinism},
        {"path analytics", analytics},
        {"mission validation", validation},
    };
    int failures = 0;
    for (const auto &[name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
