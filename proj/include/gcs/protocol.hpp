// Compact binary messages exchanged between the ground station and its
// clients. The first byte of every frame is the message type; the layout of
// the remainder depends on that type. All multi-byte fields are
// little-endian, floats are IEEE 754, angles are degrees.
//
//   0x01 Telemetry       tag | seq u32 | sim_time_ms u64 | lat f64 | lon f64 | alt_wgs84 f64
//                        | alt_rel f32 | v_east f32 | v_north f32 | v_up f32 | yaw f32
//                        | gimbal_pitch f32 | battery u8 | gps u8 | phase u8
//                        | mission_state u8 | mission_index u8                  (66 bytes)
//   0x02 ControlInput    tag | frame u8 | ball_x f32 | ball_y f32 | ball_z f32
//                        | arc_yaw f32 | arc_pitch f32                          (22 bytes)
//   0x03 WaypointUpload  tag | count u8 | count x { lat f64 | lon f64 | alt_rel f32
//                        | heading f32 | cam_pitch f32 | flags u8 }             (2 + 29 n)
//   0x04 MissionCommand  tag | action u8  (0 start, 1 pause, 2 resume, 3 abort)
//   0x05 VehicleCommand  tag | action u8  (0 takeoff, 1 land, 2 return-home, 3 e-stop)
//   0x06 SafetyOverride  tag | active u8
//   0x07 UserPose        tag | lat f64 | lon f64 | alt f64 | heading f32        (29 bytes)
//   0x08 Ack             tag | ref_tag u8 | code u8
#pragma once

#include "gcs/control.hpp"
#include "gcs/mission.hpp"
#include "gcs/vehicle.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

namespace gcs::protocol {

using Bytes = std::vector<std::uint8_t>;

enum class MessageType : std::uint8_t {
    Telemetry = 0x01,
    ControlInput = 0x02,
    WaypointUpload = 0x03,
    MissionCommand = 0x04,
    VehicleCommand = 0x05,
    SafetyOverride = 0x06,
    UserPose = 0x07,
    Ack = 0x08,
};

inline constexpr std::size_t kTelemetrySize = 66;
inline constexpr std::size_t kControlInputSize = 22;
inline constexpr std::size_t kWaypointRecordSize = 29;
inline constexpr std::size_t kUserPoseSize = 29;
inline constexpr std::size_t kMaxUploadWaypoints = 99;

struct Telemetry {
    std::uint32_t seq = 0;
    std::uint64_t sim_time_ms = 0;
    double lat = 0.0;
    double lon = 0.0;
    double alt_wgs84 = 0.0;
    float alt_rel = 0.0F;
    float v_east = 0.0F;
    float v_north = 0.0F;
    float v_up = 0.0F;
    float yaw = 0.0F;
    float gimbal_pitch = 0.0F;
    std::uint8_t battery = 0;
    std::uint8_t gps = 0;
    FlightPhase phase = FlightPhase::Grounded;
    MissionState mission_state = MissionState::Idle;
    std::uint8_t mission_index = 0;

    bool operator==(const Telemetry &) const = default;
};

struct ControlInput {
    ControlFrame frame = ControlFrame::DroneCentric;
    float ball_x = 0.0F;
    float ball_y = 0.0F;
    float ball_z = 0.0F;
    float arc_yaw = 0.0F;
    float arc_pitch = 0.0F;

    bool operator==(const ControlInput &) const = default;
};

struct WireWaypoint {
    double lat = 0.0;
    double lon = 0.0;
    float alt_rel = 0.0F;
    float heading = 0.0F;
    float cam_pitch = 0.0F;
    bool camera = false;

    bool operator==(const WireWaypoint &) const = default;
};

struct WaypointUpload {
    std::vector<WireWaypoint> waypoints;

    bool operator==(const WaypointUpload &) const = default;
};

struct MissionCommand {
    MissionAction action = MissionAction::Start;

    bool operator==(const MissionCommand &) const = default;
};

enum class VehicleAction : std::uint8_t { Takeoff = 0, Land = 1, ReturnHome = 2, EmergencyStop = 3 };

struct VehicleCommand {
    VehicleAction action = VehicleAction::Takeoff;

    bool operator==(const VehicleCommand &) const = default;
};

struct SafetyOverride {
    bool active = false;

    bool operator==(const SafetyOverride &) const = default;
};

struct UserPoseMsg {
    double lat = 0.0;
    double lon = 0.0;
    double alt = 0.0;
    float heading = 0.0F;

    bool operator==(const UserPoseMsg &) const = default;
};

enum class AckCode : std::uint8_t { Ok = 0, InvalidTransition = 1, ValidationFailed = 2, OutOfRange = 3 };

struct Ack {
    std::uint8_t ref_tag = 0;
    AckCode code = AckCode::Ok;

    bool operator==(const Ack &) const = default;
};

/// Alternatives are ordered by wire tag: index() + 1 == tag.
using Message = std::variant<Telemetry, ControlInput, WaypointUpload, MissionCommand, VehicleCommand, SafetyOverride,
                             UserPoseMsg, Ack>;

MessageType type_of(const Message &m);
std::string_view to_string(MessageType type);

/// Raised by encode() for a message whose fields violate their domain.
class EncodeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

Bytes encode(const Message &m);

/// Size in bytes of the encoding of `m`.
std::size_t encoded_size(const Message &m);

enum class DecodeError : std::uint8_t { Truncated, UnknownType, TrailingBytes, OutOfRange };

std::string_view to_string(DecodeError error);

/// Either a message or the reason the bytes are not one.
using DecodeResult = std::variant<Message, DecodeError>;

/// Total over arbitrary input: every byte string yields a message or an error.
DecodeResult decode(std::span<const std::uint8_t> bytes);

/// The Ack a server answers undecodable bytes with: OutOfRange for field
/// range errors, ValidationFailed otherwise. ref_tag is the first byte (0
/// when empty).
Ack decode_failure_ack(std::span<const std::uint8_t> bytes, DecodeError error);

enum class ChannelClass : std::uint8_t { ReliableOrdered, LossyLowLatency };

ChannelClass channel_of(const Message &m);
ChannelClass channel_of(MessageType type);

/// Decides which simulation ticks emit a telemetry frame: exactly one per
/// 100 ms of simulation time, numbered 0, 1, 2, ...
class TelemetryScheduler {
public:
    static constexpr std::int64_t kPeriodUs = 100'000;

    /// Returns the sequence number to stamp when a frame is due at
    /// `sim_time_us`. Times must be non-decreasing.
    std::optional<std::uint32_t> poll(std::int64_t sim_time_us);

    std::uint32_t frames_emitted() const noexcept { return next_seq_; }

private:
    std::int64_t next_due_us_ = kPeriodUs;
    std::uint32_t next_seq_ = 0;
};

/// Builds a telemetry frame from a vehicle and mission snapshot.
Telemetry make_telemetry(std::uint32_t seq, const VehicleState &vehicle, const MissionStatus &mission);

/// Conversions between wire waypoints and mission waypoints.
Waypoint to_waypoint(const WireWaypoint &w);
WireWaypoint to_wire(const Waypoint &w);

} // namespace gcs::protocol
