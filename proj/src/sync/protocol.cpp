#include "hybridsense/sync/protocol.hpp"

#include <array>
#include <utility>

namespace hybridsense {
namespace {

constexpr std::array<std::pair<MessageType, std::string_view>, 12> kTypeNames{{
    {MessageType::Hello, "Hello"},
    {MessageType::Welcome, "Welcome"},
    {MessageType::Op, "Op"},
    {MessageType::OpApplied, "OpApplied"},
    {MessageType::Selection, "Selection"},
    {MessageType::SelectionApplied, "SelectionApplied"},
    {MessageType::Pose, "Pose"},
    {MessageType::ResyncRequest, "ResyncRequest"},
    {MessageType::Snapshot, "Snapshot"},
    {MessageType::Ping, "Ping"},
    {MessageType::Pong, "Pong"},
    {MessageType::Error, "Error"},
}};

}  // namespace

std::string_view to_string(MessageType type) {
  for (const auto& [value, name] : kTypeNames)
    if (value == type) return name;
  return "Error";
}

MessageType message_type_from_string(std::string_view text) {
  for (const auto& [value, name] : kTypeNames)
    if (name == text) return value;
  throw ProtocolError("unknown message type: " + std::string(text));
}

std::string encode(const Message& message) {
  Json j;
  j["type"] = to_string(message.type);
  j["session"] = message.session;
  j["device"] = message.device;
  j["seq"] = message.seq ? Json(*message.seq) : Json(nullptr);
  j["payload"] = message.payload;
  return j.dump() + "\n";
}

Message decode(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("message must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "type" && key != "session" && key != "device" && key != "seq" && key != "payload")
      throw ProtocolError("unexpected envelope field: " + key);
  }
  Message message;
  try {
    message.type = message_type_from_string(j.at("type").get<std::string>());
    message.session = j.value("session", "");
    message.device = j.value("device", "");
    if (const auto it = j.find("seq"); it != j.end() && !it->is_null()) message.seq = it->get<std::int64_t>();
    if (const auto it = j.find("payload"); it != j.end() && !it->is_null()) message.payload = *it;
  } catch (const Json::exception& e) {
    throw ProtocolError(std::string("bad envelope: ") + e.what());
  }
  if (!message.payload.is_object()) throw ProtocolError("payload must be an object");
  return message;
}

std::vector<std::string> LineFramer::feed(std::string_view bytes) {
  std::vector<std::string> lines;
  buffer_.append(bytes);
  std::size_t start = 0;
  for (std::size_t nl; (nl = buffer_.find('\n', start)) != std::string::npos; start = nl + 1) {
    if (nl > start) lines.emplace_back(buffer_, start, nl - start);
  }
  buffer_.erase(0, start);
  if (buffer_.size() > max_line_bytes_) {
    buffer_.clear();
    throw ProtocolError("line exceeds maximum length");
  }
  return lines;
}

std::string_view to_string(PoseKind kind) { return kind == PoseKind::head ? "head" : "table"; }

PoseKind pose_kind_from_string(std::string_view text) {
  if (text == "head") return PoseKind::head;
  if (text == "table") return PoseKind::table;
  throw std::invalid_argument("unknown pose kind: " + std::string(text));
}

Json to_json(const PoseSample& sample) {
  return Json{{"deviceId", sample.device},
              {"kind", to_string(sample.kind)},
              {"t", sample.t},
              {"position", to_json(sample.position)},
              {"orientation", to_json(sample.orientation)}};
}

PoseSample pose_sample_from_json(const Json& j) {
  PoseSample sample;
  sample.device = j.at("deviceId").get<std::string>();
  sample.kind = pose_kind_from_string(j.at("kind").get<std::string>());
  sample.t = j.at("t").get<std::int64_t>();
  sample.position = vec3_from_json(j.at("position"));
  sample.orientation = quat_from_json(j.at("orientation"));
  return sample;
}

Json to_json(const SessionEvent& event) {
  return Json{{"seq", event.seq},
              {"wallClock", event.wall_clock},
              {"deviceId", event.device},
              {"deviceKind", to_string(event.device_kind)},
              {"body", to_json(event.body)}};
}

SessionEvent session_event_from_json(const Json& j) {
  SessionEvent event;
  event.seq = j.at("seq").get<std::int64_t>();
  event.wall_clock = j.at("wallClock").get<std::int64_t>();
  event.device = j.at("deviceId").get<std::string>();
  event.device_kind = device_kind_from_string(j.at("deviceKind").get<std::string>());
  event.body = op_from_json(j.at("body"));
  return event;
}

}  // namespace hybridsense
