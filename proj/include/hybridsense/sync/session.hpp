#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <variant>
#include <vector>

#include "hybridsense/corpus/corpus.hpp"
#include "hybridsense/sync/event_log.hpp"
#include "hybridsense/sync/protocol.hpp"

namespace hybridsense {

enum class SessionErrc { DuplicateDevice, NotJoined, MalformedPose, BadRequest, ResyncOutOfRange };
std::string_view to_string(SessionErrc code);

class SessionError : public std::runtime_error {
 public:
  SessionError(SessionErrc code, const std::string& detail);
  SessionErrc code() const noexcept { return code_; }

 private:
  SessionErrc code_;
};

struct SessionConfig {
  std::string session_id = "default";
  double pose_log_hz = 10.0;
  std::optional<Corpus> corpus;
  std::optional<std::filesystem::path> event_log_path;
  std::optional<std::filesystem::path> pose_log_path;
  // Events kept for resync; nullopt keeps the whole session.
  std::optional<std::size_t> resync_retention;
  // Wall clock in ms since epoch; defaults to the system clock.
  std::function<std::int64_t()> clock;
};

struct DevicePresence {
  DeviceId device;
  DeviceKind kind = DeviceKind::pc;
  std::int64_t connected_since = 0;
  std::int64_t last_seen = 0;
};

using MessageSink = std::function<void(const Message&)>;

struct SubmitResult {
  std::optional<std::int64_t> seq;
  std::optional<GraphErrc> error;
  std::string detail;
  bool applied() const { return seq.has_value(); }
};

enum class PoseIngest { Logged, Retained, Dropped };

struct ResyncEvents {
  std::vector<SessionEvent> events;
};
struct ResyncSnapshot {
  Graph graph;
};
using ResyncResult = std::variant<ResyncEvents, ResyncSnapshot>;

// Server-authoritative session. All graph and selection changes pass through a
// single lock that assigns the next sequence number, appends the event to the
// log and broadcasts the apply to every joined device before releasing it, so
// every connection sees applies in sequence order. Poses take a separate lock
// and never wait on graph operations.
//
// Sinks are invoked while session locks are held and must not call back into
// the session.
class Session {
 public:
  explicit Session(SessionConfig config);

  const std::string& id() const { return config_.session_id; }

  // Registers the device, delivers its Welcome (snapshot, corpus, seq) to the
  // sink and returns it.
  // Throws SessionError(DuplicateDevice) while the device id is live.
  Message join(const DeviceId& device, DeviceKind kind, MessageSink sink);
  void leave(const DeviceId& device);

  // Dispatches one client message (Op, Selection, Pose, ResyncRequest, Ping).
  // Replies and broadcasts go through the sinks.
  void handle(const DeviceId& device, const Message& message);

  // Validates, sequences, logs and broadcasts one operation. Client ids in the
  // op are replaced with server-assigned ones. On failure nothing is consumed
  // and only the sender gets an Error.
  SubmitResult submit(const DeviceId& device, Op op, const Json& request_id = nullptr);

  // Throws SessionError(MalformedPose) on a non-unit quaternion.
  PoseIngest ingest_pose(const PoseSample& sample);

  // Throws SessionError(ResyncOutOfRange) when from_seq is ahead of the session.
  ResyncResult resync(std::int64_t from_seq) const;

  Graph graph() const;
  std::int64_t seq() const;
  std::string hash() const;
  std::vector<SessionEvent> events() const;
  std::vector<PoseSample> pose_log() const;
  std::optional<PoseSample> latest_pose(const DeviceId& device, PoseKind kind) const;
  std::vector<DevicePresence> presence() const;
  Json corpus_json() const;
  void flush();

 private:
  struct Connection {
    DeviceKind kind;
    MessageSink sink;
  };

  std::int64_t now() const;
  Message make(MessageType type, const DeviceId& device, std::optional<std::int64_t> seq, Json payload) const;
  void send_to(const DeviceId& device, const Message& message);
  void broadcast(const Message& message);
  void send_error(const DeviceId& device, std::string_view code, const std::string& detail, const Json& request_id);
  SubmitResult submit_locked(const DeviceId& device, DeviceKind kind, Op op, const Json& request_id);
  ResyncResult resync_locked(std::int64_t from_seq) const;
  void seed_anchors();
  void touch(const DeviceId& device);

  SessionConfig config_;

  mutable std::mutex mutex_;
  Graph graph_;
  std::vector<SessionEvent> events_;
  std::map<DeviceId, Connection> connections_;
  std::unique_ptr<JsonlWriter> event_writer_;

  mutable std::mutex pose_mutex_;
  std::map<std::pair<DeviceId, PoseKind>, PoseSample> latest_poses_;
  std::map<std::pair<DeviceId, PoseKind>, std::int64_t> last_logged_;
  std::vector<PoseSample> pose_log_;
  std::unique_ptr<JsonlWriter> pose_writer_;

  mutable std::mutex presence_mutex_;
  std::map<DeviceId, DevicePresence> presence_;
};

}  // namespace hybridsense
