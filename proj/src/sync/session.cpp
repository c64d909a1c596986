#include "hybridsense/sync/session.hpp"

#include <chrono>

#include "hybridsense/layout/layout.hpp"

namespace hybridsense {
namespace {

constexpr double kQuaternionTolerance = 1e-6;
constexpr double kAnchorInset = 0.3;
constexpr double kAnchorHeight = 1.0;
const DeviceId kServerDevice = "server";

}  // namespace

std::string_view to_string(SessionErrc code) {
  switch (code) {
    case SessionErrc::DuplicateDevice: return "DuplicateDevice";
    case SessionErrc::NotJoined: return "NotJoined";
    case SessionErrc::MalformedPose: return "MalformedPose";
    case SessionErrc::BadRequest: return "BadRequest";
    case SessionErrc::ResyncOutOfRange: return "ResyncOutOfRange";
  }
  return "BadRequest";
}

SessionError::SessionError(SessionErrc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

Session::Session(SessionConfig config) : config_(std::move(config)) {
  if (!(config_.pose_log_hz > 0.0)) throw std::invalid_argument("pose log rate must be positive");
  if (config_.event_log_path) event_writer_ = std::make_unique<JsonlWriter>(*config_.event_log_path);
  if (config_.pose_log_path) pose_writer_ = std::make_unique<JsonlWriter>(*config_.pose_log_path);
  if (config_.corpus) seed_anchors();
}

std::int64_t Session::now() const {
  if (config_.clock) return config_.clock();
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

void Session::seed_anchors() {
  const auto& documents = config_.corpus->documents;
  if (documents.empty()) return;
  const auto panels = semicircle_placement(documents.size(), Pose::identity());
  const std::lock_guard lock(mutex_);
  for (std::size_t i = 0; i < documents.size(); ++i) {
    Vec3 toward_center = -panels[i].position;
    toward_center.y() = 0.0;
    Vec3 position = panels[i].position + toward_center.normalized() * kAnchorInset;
    position.y() = kAnchorHeight;
    submit_locked(kServerDevice, DeviceKind::pc, AddAnchor{documents[i].id, documents[i].title, position}, nullptr);
  }
}

Message Session::make(MessageType type, const DeviceId& device, std::optional<std::int64_t> seq, Json payload) const {
  return Message{type, config_.session_id, device, seq, std::move(payload)};
}

void Session::send_to(const DeviceId& device, const Message& message) {
  const auto it = connections_.find(device);
  if (it != connections_.end()) it->second.sink(message);
}

void Session::broadcast(const Message& message) {
  for (auto& [device, connection] : connections_) connection.sink(message);
}

void Session::send_error(const DeviceId& device, std::string_view code, const std::string& detail,
                         const Json& request_id) {
  send_to(device, make(MessageType::Error, device, std::nullopt,
                       Json{{"code", code}, {"message", detail}, {"requestId", request_id}}));
}

void Session::touch(const DeviceId& device) {
  const std::lock_guard lock(presence_mutex_);
  if (const auto it = presence_.find(device); it != presence_.end()) it->second.last_seen = now();
}

Json Session::corpus_json() const {
  Json documents = Json::array();
  Json manifest = Json::object();
  if (config_.corpus) {
    for (const auto& doc : config_.corpus->documents) documents.push_back(to_json(doc));
    manifest = to_json(config_.corpus->manifest);
  }
  return Json{{"manifest", manifest}, {"documents", documents}};
}

Message Session::join(const DeviceId& device, DeviceKind kind, MessageSink sink) {
  if (device.empty()) throw SessionError(SessionErrc::BadRequest, "empty device id");
  const std::lock_guard lock(mutex_);
  if (connections_.count(device)) throw SessionError(SessionErrc::DuplicateDevice, device);
  connections_.emplace(device, Connection{kind, std::move(sink)});
  {
    const std::lock_guard presence_lock(presence_mutex_);
    const auto t = now();
    presence_[device] = DevicePresence{device, kind, t, t};
  }
  auto welcome = make(MessageType::Welcome, device, graph_.seq(),
                      Json{{"snapshot", snapshot_json(graph_)},
                           {"hash", snapshot_hash(graph_)},
                           {"corpus", corpus_json()},
                           {"seq", graph_.seq()}});
  // Delivered before any later broadcast can reach this sink.
  connections_.at(device).sink(welcome);
  return welcome;
}

void Session::leave(const DeviceId& device) {
  const std::lock_guard lock(mutex_);
  connections_.erase(device);
  const std::lock_guard presence_lock(presence_mutex_);
  presence_.erase(device);
}

SubmitResult Session::submit(const DeviceId& device, Op op, const Json& request_id) {
  const std::lock_guard lock(mutex_);
  const auto it = connections_.find(device);
  if (it == connections_.end()) throw SessionError(SessionErrc::NotJoined, device);
  return submit_locked(device, it->second.kind, std::move(op), request_id);
}

SubmitResult Session::submit_locked(const DeviceId& device, DeviceKind kind, Op op, const Json& request_id) {
  const std::int64_t seq = graph_.seq() + 1;
  assign_ids(op, seq);
  ApplyEffect effect;
  try {
    // apply_op leaves the graph untouched when it throws.
    effect = apply_op(graph_, op, device, seq);
  } catch (const GraphError& e) {
    send_error(device, to_string(e.code()), e.what(), request_id);
    return SubmitResult{std::nullopt, e.code(), e.what()};
  }

  SessionEvent event{seq, now(), device, kind, op};
  if (event_writer_) event_writer_->append(to_json(event));
  events_.push_back(std::move(event));

  const bool selection = is_selection(op);
  Json payload{{"op", to_json(op)}, {"hash", snapshot_hash(graph_)}, {"requestId", request_id}};
  if (selection) {
    payload["selection"] = to_json(graph_.selection());
  } else {
    payload["result"] = effect_json(graph_, effect);
  }
  broadcast(make(selection ? MessageType::SelectionApplied : MessageType::OpApplied, device, seq, std::move(payload)));
  return SubmitResult{seq, std::nullopt, {}};
}

PoseIngest Session::ingest_pose(const PoseSample& sample) {
  if (!sample.position.allFinite() || !is_unit(sample.orientation, kQuaternionTolerance))
    throw SessionError(SessionErrc::MalformedPose, "orientation norm " + std::to_string(sample.orientation.norm()));
  const std::lock_guard lock(pose_mutex_);
  const auto key = std::pair{sample.device, sample.kind};
  if (const auto it = latest_poses_.find(key); it != latest_poses_.end() && sample.t < it->second.t)
    return PoseIngest::Dropped;
  latest_poses_[key] = sample;

  const double interval_ms = 1000.0 / config_.pose_log_hz;
  const auto logged = last_logged_.find(key);
  if (logged != last_logged_.end() && static_cast<double>(sample.t - logged->second) < interval_ms)
    return PoseIngest::Retained;
  last_logged_[key] = sample.t;
  pose_log_.push_back(sample);
  if (pose_writer_) pose_writer_->append(to_json(sample));
  return PoseIngest::Logged;
}

ResyncResult Session::resync(std::int64_t from_seq) const {
  const std::lock_guard lock(mutex_);
  return resync_locked(from_seq);
}

ResyncResult Session::resync_locked(std::int64_t from_seq) const {
  const std::int64_t current = graph_.seq();
  if (from_seq > current || from_seq < 0)
    throw SessionError(SessionErrc::ResyncOutOfRange,
                       "fromSeq " + std::to_string(from_seq) + " outside 0.." + std::to_string(current));
  const std::int64_t retained = config_.resync_retention ? static_cast<std::int64_t>(*config_.resync_retention)
                                                         : static_cast<std::int64_t>(events_.size());
  if (current - from_seq > retained) return ResyncSnapshot{graph_};
  // Events are gap-free from seq 1, so seq s lives at index s - 1.
  return ResyncEvents{std::vector<SessionEvent>(events_.begin() + from_seq, events_.end())};
}

void Session::handle(const DeviceId& device, const Message& message) {
  touch(device);
  Json request_id = message.payload.contains("requestId") ? message.payload["requestId"] : Json(nullptr);
  try {
    switch (message.type) {
      case MessageType::Op: {
        Op op = op_from_json(message.payload.at("op"));
        if (std::holds_alternative<SetSelection>(op) || std::holds_alternative<AddAnchor>(op))
          throw SessionError(SessionErrc::BadRequest, std::string(op_type(op)) + " is not a client operation");
        submit(device, std::move(op), request_id);
        return;
      }
      case MessageType::Selection: {
        SetSelection selection;
        if (const auto it = message.payload.find("documentId"); it != message.payload.end() && !it->is_null())
          selection.document = it->get<std::string>();
        if (const auto it = message.payload.find("nodeIds"); it != message.payload.end())
          selection.nodes = it->get<std::set<NodeId>>();
        submit(device, selection, request_id);
        return;
      }
      case MessageType::Pose: {
        PoseSample sample = pose_sample_from_json(message.payload);
        if (sample.device.empty()) sample.device = device;
        ingest_pose(sample);
        return;
      }
      case MessageType::ResyncRequest: {
        const auto from = message.payload.at("fromSeq").get<std::int64_t>();
        const std::lock_guard lock(mutex_);
        const auto result = resync_locked(from);
        Json payload{{"requestId", request_id}};
        if (const auto* suffix = std::get_if<ResyncEvents>(&result)) {
          Json events = Json::array();
          for (const auto& e : suffix->events) events.push_back(to_json(e));
          payload["events"] = std::move(events);
        } else {
          const auto& graph = std::get<ResyncSnapshot>(result).graph;
          payload["snapshot"] = snapshot_json(graph);
          payload["hash"] = snapshot_hash(graph);
        }
        // Sent under the apply lock so no later apply can overtake the reply.
        payload["seq"] = graph_.seq();
        send_to(device, make(MessageType::Snapshot, device, graph_.seq(), std::move(payload)));
        return;
      }
      case MessageType::Ping: {
        const std::lock_guard lock(mutex_);
        send_to(device, make(MessageType::Pong, device, graph_.seq(), Json{{"requestId", request_id}}));
        return;
      }
      default:
        throw SessionError(SessionErrc::BadRequest, "unexpected message " + std::string(to_string(message.type)));
    }
  } catch (const SessionError& e) {
    const std::lock_guard lock(mutex_);
    send_error(device, to_string(e.code()), e.what(), request_id);
  } catch (const std::exception& e) {
    const std::lock_guard lock(mutex_);
    send_error(device, "BadRequest", e.what(), request_id);
  }
}

Graph Session::graph() const {
  const std::lock_guard lock(mutex_);
  return graph_;
}

std::int64_t Session::seq() const {
  const std::lock_guard lock(mutex_);
  return graph_.seq();
}

std::string Session::hash() const {
  const std::lock_guard lock(mutex_);
  return snapshot_hash(graph_);
}

std::vector<SessionEvent> Session::events() const {
  const std::lock_guard lock(mutex_);
  return events_;
}

std::vector<PoseSample> Session::pose_log() const {
  const std::lock_guard lock(pose_mutex_);
  return pose_log_;
}

std::optional<PoseSample> Session::latest_pose(const DeviceId& device, PoseKind kind) const {
  const std::lock_guard lock(pose_mutex_);
  const auto it = latest_poses_.find({device, kind});
  if (it == latest_poses_.end()) return std::nullopt;
  return it->second;
}

std::vector<DevicePresence> Session::presence() const {
  const std::lock_guard lock(presence_mutex_);
  std::vector<DevicePresence> out;
  for (const auto& [id, p] : presence_) out.push_back(p);
  return out;
}

void Session::flush() {
  if (event_writer_) event_writer_->flush();
  if (pose_writer_) pose_writer_->flush();
}

}  // namespace hybridsense
