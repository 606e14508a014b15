// gcsim: ground-control simulation server, scripted runs and log analysis.
//
// Exit codes: 0 success, 1 usage, 2 validation, 3 runtime.

#include "gcs/errors.hpp"
#include "gcs/flight_log.hpp"
#include "gcs/server/script.hpp"
#include "gcs/server/serve.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

int cmd_serve(const std::string &scenario_path, bool realtime, const std::string &listen, const std::string &log_dir,
              double duration_s) {
    const auto scenario = gcs::load_scenario_file(scenario_path);
    const auto terrain = gcs::build_terrain(scenario);
    gcs::validate_scenario(scenario, terrain);

    gcs::ServeOptions options;
    options.realtime = realtime;
    if (!listen.empty()) {
        gcs::parse_listen_address(listen);
        options.listen = listen;
    }
    if (!log_dir.empty()) {
        options.log_dir = log_dir;
    }
    options.duration_s = duration_s;
    options.handle_signals = true;
    options.on_listening = [](unsigned short port) {
        std::printf("listening on port %u\n", static_cast<unsigned>(port));
        std::fflush(stdout);
    };
    const auto summary = gcs::run_server(scenario, terrain, options);
    std::printf("ticks %llu, telemetry frames %u\n", static_cast<unsigned long long>(summary.ticks),
                summary.telemetry_frames);
    for (const auto &f : summary.log_files) {
        std::printf("wrote %s\n", f.c_str());
    }
    return kExitOk;
}

int cmd_script(const std::string &scenario_path, const std::string &script_path, const std::string &out_path) {
    const auto scenario = gcs::load_scenario_file(scenario_path);
    const auto terrain = gcs::build_terrain(scenario);
    gcs::validate_scenario(scenario, terrain);
    const auto script = gcs::load_script_file(script_path);
    const auto result = gcs::run_script(scenario, terrain, script);
    gcs::write_log_file(result.log, out_path);

    for (const auto &a : result.acks) {
        if (a.ack.code != gcs::protocol::AckCode::Ok) {
            std::fprintf(stderr, "t=%.3f s: message 0x%02x rejected (code %u)\n", static_cast<double>(a.time_us) * 1e-6,
                         a.ack.ref_tag, static_cast<unsigned>(a.ack.code));
        }
    }
    std::printf("%zu records, %u telemetry frames, final phase %s, mission %s\n", result.log.size(),
                result.telemetry_frames, std::string(gcs::to_string(result.final_vehicle.phase)).c_str(),
                std::string(gcs::to_string(result.final_mission.state)).c_str());
    return kExitOk;
}

int cmd_score(const std::string &plan_path, const std::string &config_path, const std::vector<std::string> &logs) {
    const auto plan_file = gcs::load_plan_file(plan_path);
    const gcs::ScoreConfig config = config_path.empty() ? gcs::ScoreConfig{} : gcs::load_score_config_file(config_path);
    config.validate();

    struct Entry {
        std::string path;
        gcs::FlightLog log;
        gcs::MissionPlan plan;
        double time_s = 0.0;
        gcs::ScoreReport report;
    };
    std::vector<Entry> entries;
    for (const auto &path : logs) {
        try {
            Entry e;
            e.path = path;
            e.log = gcs::read_log_file(path);
            if (e.log.empty()) {
                throw gcs::ValidationError("log has no records");
            }
            e.plan = gcs::plan_for_log(plan_file, e.log);
            e.time_s = gcs::completion_time_s(e.log, e.plan);
            entries.push_back(std::move(e));
        } catch (const std::exception &err) {
            std::fprintf(stderr, "%s: %s\n", path.c_str(), err.what());
        }
    }
    if (entries.empty()) {
        std::fprintf(stderr, "no log could be scored\n");
        return kExitRuntime;
    }
    std::vector<double> cohort;
    for (const auto &e : entries) {
        cohort.push_back(e.time_s);
    }
    for (auto &e : entries) {
        e.report = gcs::score(e.log, e.plan, config, cohort);
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry &a, const Entry &b) { return a.report.score > b.report.score; });

    std::printf("log,score,d_bar,final_distance_m,completion_time_s,time_term,photo,gate\n");
    for (const auto &e : entries) {
        const auto &r = e.report;
        std::printf("%s,%.9f,%.9f,%.3f,%.3f,%.9f,%d,%d\n", e.path.c_str(), r.score, r.d_bar, r.final_distance_m,
                    r.completion_time_s, r.time_term, r.photo, r.gate_passed ? 1 : 0);
    }
    return kExitOk;
}

int cmd_analyze(const std::string &log_path, double spacing_m, double turn_deg) {
    const auto log = gcs::read_log_file(log_path);
    const auto analytics = gcs::analyze_path(log, spacing_m, turn_deg);
    gcs::export_plot_data(analytics, std::cout);
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Ground-control UAV simulation suite"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string script_path;
    std::string out_path;
    std::string listen;
    std::string log_dir;
    std::string plan_path;
    std::string config_path;
    std::string log_path;
    std::vector<std::string> logs;
    bool realtime = false;
    double duration_s = 0.0;
    double spacing_m = 1.0;
    double turn_deg = 20.0;

    auto *serve = app.add_subcommand("serve", "Run the simulation and serve clients over WebSocket");
    serve->add_option("--scenario", scenario_path, "Scenario file")->required();
    serve->add_flag("--realtime", realtime, "Pace the simulation to the wall clock");
    serve->add_option("--listen", listen, "host:port to listen on");
    serve->add_option("--log-dir", log_dir, "Directory for per-flight logs");
    serve->add_option("--duration", duration_s, "Stop after this many simulated seconds")->check(CLI::NonNegativeNumber);

    auto *script = app.add_subcommand("script", "Run a scripted session headless and write its log");
    script->add_option("--scenario", scenario_path, "Scenario file")->required();
    script->add_option("--script", script_path, "Script file")->required();
    script->add_option("--out", out_path, "Output log")->required();

    auto *score = app.add_subcommand("score", "Score logs against a plan");
    score->add_option("--plan", plan_path, "Plan file")->required();
    score->add_option("--config", config_path, "Score config file");
    score->add_option("logs", logs, "Log files")->required();

    auto *analyze = app.add_subcommand("analyze", "Resample a log and print plot data");
    analyze->add_option("log", log_path, "Log file")->required();
    analyze->add_option("--spacing-m", spacing_m, "Resampling spacing")->check(CLI::PositiveNumber);
    analyze->add_option("--turn-deg", turn_deg, "Heading-change threshold")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (serve->parsed()) {
            return cmd_serve(scenario_path, realtime, listen, log_dir, duration_s);
        }
        if (script->parsed()) {
            return cmd_script(scenario_path, script_path, out_path);
        }
        if (score->parsed()) {
            return cmd_score(plan_path, config_path, logs);
        }
        return cmd_analyze(log_path, spacing_m, turn_deg);
    } catch (const gcs::ValidationError &e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitValidation;
    } catch (const gcs::ParseError &e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
