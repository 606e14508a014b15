#include "gcs/protocol.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <type_traits>

namespace gcs::protocol {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

constexpr float kBallNormSlack = 1e-6F;

template <typename T> void put(Bytes &out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<std::uint8_t, sizeof(T)> raw{};
    std::memcpy(raw.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(raw.begin(), raw.end());
    }
    out.insert(out.end(), raw.begin(), raw.end());
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <typename T> T get() {
        std::array<std::uint8_t, sizeof(T)> raw{};
        std::memcpy(raw.data(), bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) {
            std::reverse(raw.begin(), raw.end());
        }
        pos_ += sizeof(T);
        T value;
        std::memcpy(&value, raw.data(), sizeof(T));
        return value;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

bool finite(double v) { return std::isfinite(v); }
bool in(double v, double lo, double hi) { return v >= lo && v <= hi; }
bool valid_lat(double v) { return in(v, -90.0, 90.0); }
bool valid_lon(double v) { return in(v, -180.0, 180.0); }
bool valid_heading(double v) { return in(v, 0.0, 360.0); }
bool valid_pitch(double v) { return in(v, kGimbalMinDeg, kGimbalMaxDeg); }

bool valid(const Telemetry &m) {
    return valid_lat(m.lat) && valid_lon(m.lon) && finite(m.alt_wgs84) && finite(m.alt_rel) && finite(m.v_east) &&
           finite(m.v_north) && finite(m.v_up) && valid_heading(m.yaw) && valid_pitch(m.gimbal_pitch) &&
           m.battery <= 100 && m.gps <= 5 && static_cast<int>(m.phase) < kFlightPhaseCount &&
           static_cast<int>(m.mission_state) < kMissionStateCount;
}

bool valid(const ControlInput &m) {
    if (m.frame != ControlFrame::DroneCentric && m.frame != ControlFrame::UserCentric) {
        return false;
    }
    if (!finite(m.ball_x) || !finite(m.ball_y) || !finite(m.ball_z)) {
        return false;
    }
    const double n2 = double(m.ball_x) * m.ball_x + double(m.ball_y) * m.ball_y + double(m.ball_z) * m.ball_z;
    return n2 <= (1.0 + kBallNormSlack) * (1.0 + kBallNormSlack) && in(m.arc_yaw, -1.0, 1.0) &&
           in(m.arc_pitch, -1.0, 1.0);
}

bool valid(const WireWaypoint &w) {
    return valid_lat(w.lat) && valid_lon(w.lon) && finite(w.alt_rel) && w.alt_rel >= 0.0F &&
           valid_heading(w.heading) && valid_pitch(w.cam_pitch);
}

bool valid(const WaypointUpload &m) {
    return !m.waypoints.empty() && m.waypoints.size() <= kMaxUploadWaypoints &&
           std::all_of(m.waypoints.begin(), m.waypoints.end(), [](const WireWaypoint &w) { return valid(w); });
}

bool valid(const MissionCommand &m) { return static_cast<int>(m.action) <= 3; }
bool valid(const VehicleCommand &m) { return static_cast<int>(m.action) <= 3; }
bool valid(const SafetyOverride &) { return true; }
bool valid(const UserPoseMsg &m) {
    return valid_lat(m.lat) && valid_lon(m.lon) && finite(m.alt) && valid_heading(m.heading);
}
bool valid(const Ack &m) { return static_cast<int>(m.code) <= 3; }

void write(Bytes &out, const Telemetry &m) {
    put(out, m.seq);
    put(out, m.sim_time_ms);
    put(out, m.lat);
    put(out, m.lon);
    put(out, m.alt_wgs84);
    put(out, m.alt_rel);
    put(out, m.v_east);
    put(out, m.v_north);
    put(out, m.v_up);
    put(out, m.yaw);
    put(out, m.gimbal_pitch);
    put(out, m.battery);
    put(out, m.gps);
    put(out, static_cast<std::uint8_t>(m.phase));
    put(out, static_cast<std::uint8_t>(m.mission_state));
    put(out, m.mission_index);
}

void write(Bytes &out, const ControlInput &m) {
    put(out, static_cast<std::uint8_t>(m.frame));
    put(out, m.ball_x);
    put(out, m.ball_y);
    put(out, m.ball_z);
    put(out, m.arc_yaw);
    put(out, m.arc_pitch);
}

void write(Bytes &out, const WaypointUpload &m) {
    put(out, static_cast<std::uint8_t>(m.waypoints.size()));
    for (const auto &w : m.waypoints) {
        put(out, w.lat);
        put(out, w.lon);
        put(out, w.alt_rel);
        put(out, w.heading);
        put(out, w.cam_pitch);
        put(out, static_cast<std::uint8_t>(w.camera ? 1 : 0));
    }
}

void write(Bytes &out, const MissionCommand &m) { put(out, static_cast<std::uint8_t>(m.action)); }
void write(Bytes &out, const VehicleCommand &m) { put(out, static_cast<std::uint8_t>(m.action)); }
void write(Bytes &out, const SafetyOverride &m) { put(out, static_cast<std::uint8_t>(m.active ? 1 : 0)); }

void write(Bytes &out, const UserPoseMsg &m) {
    put(out, m.lat);
    put(out, m.lon);
    put(out, m.alt);
    put(out, m.heading);
}

void write(Bytes &out, const Ack &m) {
    put(out, m.ref_tag);
    put(out, static_cast<std::uint8_t>(m.code));
}

std::size_t fixed_size(MessageType type) {
    switch (type) {
    case MessageType::Telemetry:
        return kTelemetrySize;
    case MessageType::ControlInput:
        return kControlInputSize;
    case MessageType::WaypointUpload:
        return 0; // variable
    case MessageType::MissionCommand:
    case MessageType::VehicleCommand:
    case MessageType::SafetyOverride:
        return 2;
    case MessageType::UserPose:
        return kUserPoseSize;
    case MessageType::Ack:
        return 3;
    }
    return 0;
}

template <typename T> DecodeResult checked(T m) {
    if (!valid(m)) {
        return DecodeError::OutOfRange;
    }
    return Message{std::move(m)};
}

DecodeResult read_body(MessageType type, Reader &r, std::span<const std::uint8_t> bytes) {
    switch (type) {
    case MessageType::Telemetry: {
        Telemetry m;
        m.seq = r.get<std::uint32_t>();
        m.sim_time_ms = r.get<std::uint64_t>();
        m.lat = r.get<double>();
        m.lon = r.get<double>();
        m.alt_wgs84 = r.get<double>();
        m.alt_rel = r.get<float>();
        m.v_east = r.get<float>();
        m.v_north = r.get<float>();
        m.v_up = r.get<float>();
        m.yaw = r.get<float>();
        m.gimbal_pitch = r.get<float>();
        m.battery = r.get<std::uint8_t>();
        m.gps = r.get<std::uint8_t>();
        const auto phase = r.get<std::uint8_t>();
        const auto state = r.get<std::uint8_t>();
        m.mission_index = r.get<std::uint8_t>();
        if (phase >= kFlightPhaseCount || state >= kMissionStateCount) {
            return DecodeError::OutOfRange;
        }
        m.phase = static_cast<FlightPhase>(phase);
        m.mission_state = static_cast<MissionState>(state);
        return checked(m);
    }
    case MessageType::ControlInput: {
        const auto frame = r.get<std::uint8_t>();
        if (frame > 1) {
            return DecodeError::OutOfRange;
        }
        ControlInput m;
        m.frame = static_cast<ControlFrame>(frame);
        m.ball_x = r.get<float>();
        m.ball_y = r.get<float>();
        m.ball_z = r.get<float>();
        m.arc_yaw = r.get<float>();
        m.arc_pitch = r.get<float>();
        return checked(m);
    }
    case MessageType::WaypointUpload: {
        const std::size_t count = r.get<std::uint8_t>();
        const std::size_t expected = 2 + count * kWaypointRecordSize;
        if (bytes.size() < expected) {
            return DecodeError::Truncated;
        }
        if (bytes.size() > expected) {
            return DecodeError::TrailingBytes;
        }
        WaypointUpload m;
        m.waypoints.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            WireWaypoint w;
            w.lat = r.get<double>();
            w.lon = r.get<double>();
            w.alt_rel = r.get<float>();
            w.heading = r.get<float>();
            w.cam_pitch = r.get<float>();
            const auto flags = r.get<std::uint8_t>();
            if (flags > 1) {
                return DecodeError::OutOfRange;
            }
            w.camera = flags == 1;
            m.waypoints.push_back(w);
        }
        return checked(std::move(m));
    }
    case MessageType::MissionCommand: {
        const auto action = r.get<std::uint8_t>();
        if (action > 3) {
            return DecodeError::OutOfRange;
        }
        return Message{MissionCommand{static_cast<MissionAction>(action)}};
    }
    case MessageType::VehicleCommand: {
        const auto action = r.get<std::uint8_t>();
        if (action > 3) {
            return DecodeError::OutOfRange;
        }
        return Message{VehicleCommand{static_cast<VehicleAction>(action)}};
    }
    case MessageType::SafetyOverride: {
        const auto active = r.get<std::uint8_t>();
        if (active > 1) {
            return DecodeError::OutOfRange;
        }
        return Message{SafetyOverride{active == 1}};
    }
    case MessageType::UserPose: {
        UserPoseMsg m;
        m.lat = r.get<double>();
        m.lon = r.get<double>();
        m.alt = r.get<double>();
        m.heading = r.get<float>();
        return checked(m);
    }
    case MessageType::Ack: {
        Ack m;
        m.ref_tag = r.get<std::uint8_t>();
        const auto code = r.get<std::uint8_t>();
        if (code > 3) {
            return DecodeError::OutOfRange;
        }
        m.code = static_cast<AckCode>(code);
        return Message{m};
    }
    }
    return DecodeError::UnknownType;
}

} // namespace

MessageType type_of(const Message &m) { return static_cast<MessageType>(m.index() + 1); }

std::string_view to_string(MessageType type) {
    switch (type) {
    case MessageType::Telemetry:
        return "Telemetry";
    case MessageType::ControlInput:
        return "ControlInput";
    case MessageType::WaypointUpload:
        return "WaypointUpload";
    case MessageType::MissionCommand:
        return "MissionCommand";
    case MessageType::VehicleCommand:
        return "VehicleCommand";
    case MessageType::SafetyOverride:
        return "SafetyOverride";
    case MessageType::UserPose:
        return "UserPose";
    case MessageType::Ack:
        return "Ack";
    }
    return "Unknown";
}

std::string_view to_string(DecodeError error) {
    switch (error) {
    case DecodeError::Truncated:
        return "truncated";
    case DecodeError::UnknownType:
        return "unknown-type";
    case DecodeError::TrailingBytes:
        return "trailing-bytes";
    case DecodeError::OutOfRange:
        return "out-of-range";
    }
    return "unknown";
}

std::size_t encoded_size(const Message &m) {
    if (const auto *upload = std::get_if<WaypointUpload>(&m)) {
        return 2 + kWaypointRecordSize * upload->waypoints.size();
    }
    return fixed_size(type_of(m));
}

Bytes encode(const Message &m) {
    return std::visit(
        [&m](const auto &body) {
            if (!valid(body)) {
                throw EncodeError("encode: " + std::string(to_string(type_of(m))) + " has a field out of range");
            }
            Bytes out;
            out.reserve(encoded_size(m));
            out.push_back(static_cast<std::uint8_t>(type_of(m)));
            write(out, body);
            return out;
        },
        m);
}

DecodeResult decode(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) {
        return DecodeError::Truncated;
    }
    const std::uint8_t tag = bytes[0];
    if (tag < 0x01 || tag > 0x08) {
        return DecodeError::UnknownType;
    }
    const auto type = static_cast<MessageType>(tag);
    if (type == MessageType::WaypointUpload) {
        if (bytes.size() < 2) {
            return DecodeError::Truncated;
        }
    } else {
        const std::size_t expected = fixed_size(type);
        if (bytes.size() < expected) {
            return DecodeError::Truncated;
        }
        if (bytes.size() > expected) {
            return DecodeError::TrailingBytes;
        }
    }
    Reader r(bytes.subspan(1));
    return read_body(type, r, bytes);
}

ChannelClass channel_of(MessageType type) {
    return type == MessageType::Telemetry ? ChannelClass::LossyLowLatency : ChannelClass::ReliableOrdered;
}

ChannelClass channel_of(const Message &m) { return channel_of(type_of(m)); }

std::optional<std::uint32_t> TelemetryScheduler::poll(std::int64_t sim_time_us) {
    if (sim_time_us < next_due_us_) {
        return std::nullopt;
    }
    // One frame per call even if several periods elapsed; the caller ticks
    // faster than the telemetry rate.
    next_due_us_ += kPeriodUs;
    while (next_due_us_ <= sim_time_us) {
        next_due_us_ += kPeriodUs;
    }
    return next_seq_++;
}

Telemetry make_telemetry(std::uint32_t seq, const VehicleState &vehicle, const MissionStatus &mission) {
    Telemetry t;
    t.seq = seq;
    t.sim_time_ms = static_cast<std::uint64_t>(std::max<std::int64_t>(0, vehicle.time_us / 1000));
    t.lat = vehicle.position.latitude_deg;
    t.lon = vehicle.position.longitude_deg;
    t.alt_wgs84 = vehicle.position.altitude_m;
    t.alt_rel = static_cast<float>(vehicle.altitude_rel_m());
    t.v_east = static_cast<float>(vehicle.velocity_mps.east_m);
    t.v_north = static_cast<float>(vehicle.velocity_mps.north_m);
    t.v_up = static_cast<float>(vehicle.velocity_mps.up_m);
    t.yaw = static_cast<float>(vehicle.yaw_deg);
    t.gimbal_pitch = static_cast<float>(vehicle.gimbal_pitch_deg);
    t.battery = static_cast<std::uint8_t>(std::clamp(std::lround(vehicle.battery_pct), 0L, 100L));
    t.gps = static_cast<std::uint8_t>(std::clamp(vehicle.gps_level, 0, 5));
    t.phase = vehicle.phase;
    t.mission_state = mission.state;
    t.mission_index = static_cast<std::uint8_t>(std::min<std::size_t>(mission.current_index, 255));
    return t;
}

Waypoint to_waypoint(const WireWaypoint &w) {
    Waypoint out;
    out.position = {w.lat, w.lon, static_cast<double>(w.alt_rel)};
    out.heading_deg = normalize_heading_deg(w.heading);
    out.camera_pitch_deg = w.cam_pitch;
    out.is_camera_waypoint = w.camera;
    return out;
}

WireWaypoint to_wire(const Waypoint &w) {
    return {w.position.latitude_deg,
            w.position.longitude_deg,
            static_cast<float>(w.position.altitude_m),
            static_cast<float>(w.heading_deg),
            static_cast<float>(w.camera_pitch_deg),
            w.is_camera_waypoint};
}

Ack decode_failure_ack(std::span<const std::uint8_t> bytes, DecodeError error) {
    Ack ack;
    ack.ref_tag = bytes.empty() ? 0 : bytes[0];
    ack.code = error == DecodeError::OutOfRange ? AckCode::OutOfRange : AckCode::ValidationFailed;
    return ack;
}

} // namespace gcs::protocol
