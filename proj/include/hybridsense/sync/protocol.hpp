#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridsense/graph/ops.hpp"

namespace hybridsense {

enum class MessageType {
  Hello,
  Welcome,
  Op,
  OpApplied,
  Selection,
  SelectionApplied,
  Pose,
  ResyncRequest,
  Snapshot,
  Ping,
  Pong,
  Error,
};

std::string_view to_string(MessageType type);
MessageType message_type_from_string(std::string_view text);

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Envelope {"type","session","device","seq","payload"}; seq is null except on
// server-to-client apply, snapshot and welcome messages.
struct Message {
  MessageType type = MessageType::Ping;
  std::string session;
  std::string device;
  std::optional<std::int64_t> seq;
  Json payload = Json::object();
};

// One JSON object terminated by '\n'.
std::string encode(const Message& message);
// Parses one line (without the terminator). Throws ProtocolError.
Message decode(std::string_view line);

// Splits an incoming byte stream into lines.
class LineFramer {
 public:
  explicit LineFramer(std::size_t max_line_bytes = 16u << 20) : max_line_bytes_(max_line_bytes) {}

  // Appends bytes and returns every completed line. Throws ProtocolError when a
  // line grows past the limit.
  std::vector<std::string> feed(std::string_view bytes);
  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::string buffer_;
  std::size_t max_line_bytes_;
};

enum class PoseKind { head, table };
std::string_view to_string(PoseKind kind);
PoseKind pose_kind_from_string(std::string_view text);

struct PoseSample {
  DeviceId device;
  PoseKind kind = PoseKind::head;
  std::int64_t t = 0;  // ms since epoch
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  Pose pose() const { return {position, orientation}; }
};

// Orientation is serialized as [w, x, y, z].
Json to_json(const PoseSample& sample);
PoseSample pose_sample_from_json(const Json& j);

struct SessionEvent {
  std::int64_t seq = 0;
  std::int64_t wall_clock = 0;
  DeviceId device;
  DeviceKind device_kind = DeviceKind::pc;
  hybridsense::Op body;
};

Json to_json(const SessionEvent& event);
SessionEvent session_event_from_json(const Json& j);

}  // namespace hybridsense
