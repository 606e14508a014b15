#include "gcs/server/serve.hpp"

#include "gcs/errors.hpp"
#include "gcs/server/simulation.hpp"
#include "ws_server.hpp"

#include <boost/asio/executor_work_guard.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/signal_set.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <thread>

namespace gcs {

namespace {

/// Splits the record stream into flights: a flight opens on the first
/// airborne record and closes on Grounded or Crashed.
class FlightRecorder {
public:
    explicit FlightRecorder(std::optional<std::string> dir) : dir_(std::move(dir)) {
        if (dir_) {
            std::filesystem::create_directories(*dir_);
        }
    }

    void add(const LogRecord &r) {
        if (!current_ && is_airborne(r.phase)) {
            current_.emplace();
        }
        if (!current_) {
            return;
        }
        current_->push_back(r);
        if (r.phase == FlightPhase::Grounded || r.phase == FlightPhase::Crashed) {
            flush();
        }
    }

    void flush() {
        if (!current_) {
            return;
        }
        if (dir_) {
            std::array<char, 32> name{};
            std::snprintf(name.data(), name.size(), "flight-%03zu", files_.size() + 1);
            const auto path = (std::filesystem::path(*dir_) / (std::string(name.data()) + kLogExtension)).string();
            write_log_file(*current_, path);
            files_.push_back(path);
        }
        current_.reset();
    }

    const std::vector<std::string> &files() const noexcept { return files_; }

private:
    std::optional<std::string> dir_;
    std::optional<FlightLog> current_;
    std::vector<std::string> files_;
};

bool is_streaming_input(const protocol::Message &m) {
    return std::holds_alternative<protocol::ControlInput>(m) || std::holds_alternative<protocol::UserPoseMsg>(m);
}

} // namespace

ServeSummary run_server(const Scenario &scenario, const HeightField &terrain, const ServeOptions &options) {
    namespace asio = boost::asio;

    Simulation sim(scenario, terrain);
    const auto [host, port] = parse_listen_address(options.listen.value_or(scenario.listen));
    FlightRecorder recorder(options.log_dir);

    OrderedChannel<net::Inbound> inbound;
    asio::io_context ioc;
    auto work = asio::make_work_guard(ioc);
    auto server = std::make_shared<net::WsServer>(ioc, host, port, inbound);
    server->start();

    std::atomic<bool> signalled{false};
    std::optional<asio::signal_set> signals;
    if (options.handle_signals) {
        signals.emplace(ioc, SIGINT, SIGTERM);
        signals->async_wait([&signalled](const boost::system::error_code &ec, int) {
            if (!ec) {
                signalled = true;
            }
        });
    }
    std::thread io_thread([&ioc] { ioc.run(); });
    const auto stop_requested = [&] {
        return signalled.load() || (options.stop != nullptr && options.stop->load());
    };
    const std::int64_t end_us = options.duration_s > 0.0 ? std::llround(options.duration_s * 1e6) : -1;
    const auto tick_period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(scenario.dt_s()));
    auto next_tick = std::chrono::steady_clock::now();

    const auto shutdown = [&] {
        asio::post(ioc, [server, &signals, &ioc] {
            server->close();
            if (signals) {
                signals->cancel();
            }
            ioc.stop();
        });
        work.reset();
        io_thread.join();
    };

    ServeSummary summary;
    try {
        if (options.on_listening) {
            options.on_listening(server->port());
        }
        while (!stop_requested() && (end_us < 0 || sim.time_us() < end_us)) {
            for (auto &in : inbound.drain()) {
                const auto decoded = protocol::decode(in.frame);
                protocol::Ack ack;
                bool reply = true;
                if (const auto *msg = std::get_if<protocol::Message>(&decoded)) {
                    ack = sim.handle(*msg);
                    reply = ack.code != protocol::AckCode::Ok || !is_streaming_input(*msg);
                } else {
                    ack = protocol::decode_failure_ack(in.frame, std::get<protocol::DecodeError>(decoded));
                }
                if (reply) {
                    auto bytes = std::make_shared<const protocol::Bytes>(protocol::encode(ack));
                    asio::post(ioc, [server, id = in.session_id, bytes] { server->send_to(id, bytes); });
                }
            }

            const auto out = sim.tick();
            ++summary.ticks;
            if (out.telemetry) {
                ++summary.telemetry_frames;
                auto bytes = std::make_shared<const protocol::Bytes>(protocol::encode(*out.telemetry));
                asio::post(ioc, [server, bytes] { server->broadcast(bytes, true); });
            }
            if (out.record) {
                recorder.add(*out.record);
            }
            if (options.realtime) {
                next_tick += tick_period;
                std::this_thread::sleep_until(next_tick);
            }
        }
        recorder.flush();
    } catch (...) {
        shutdown();
        throw;
    }
    shutdown();

    summary.log_files = recorder.files();
    return summary;
}

} // namespace gcs
