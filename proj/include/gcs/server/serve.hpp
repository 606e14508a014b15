// The networked simulation: one WebSocket listener, binary frames carrying
// one protocol message each.
//
// Sessions only enqueue received frames; the simulation thread drains the
// queue in arrival order before every tick. Acks go back to the sending
// session; telemetry is broadcast to all. Streaming inputs (ControlInput,
// UserPose) are acknowledged only when rejected. A session whose socket
// falls behind loses its oldest unsent telemetry frames, never Acks.
#pragma once

#include "gcs/server/scenario.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gcs {

struct ServeOptions {
    bool realtime = false;                 ///< pace ticks to the wall clock
    std::optional<std::string> listen;     ///< overrides the scenario's address
    std::optional<std::string> log_dir;    ///< one log per flight session
    double duration_s = 0.0;               ///< simulated seconds; 0 runs until stopped
    std::function<void(unsigned short port)> on_listening;
    const std::atomic<bool> *stop = nullptr;
    bool handle_signals = false;           ///< SIGINT / SIGTERM stop the server
};

struct ServeSummary {
    std::uint64_t ticks = 0;
    std::uint32_t telemetry_frames = 0;
    std::vector<std::string> log_files;
};

/// Serves until the duration elapses or a stop is requested. Throws Error
/// when the address cannot be bound.
ServeSummary run_server(const Scenario &scenario, const HeightField &terrain, const ServeOptions &options);

} // namespace gcs
