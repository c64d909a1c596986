#include "hybridsense/sync/replica.hpp"

namespace hybridsense {

void Replica::load(const Message& message) {
  graph_ = graph_from_snapshot(message.payload.at("snapshot"));
  if (message.payload.contains("corpus")) corpus_ = message.payload.at("corpus");
  if (message.payload.contains("hash")) consistent_ = snapshot_hash(graph_) == message.payload.at("hash");
}

void Replica::apply_event(const Op& op, const DeviceId& device, std::int64_t seq) {
  apply_op(graph_, op, device, seq);
}

Replica::Outcome Replica::apply(const Message& message) {
  switch (message.type) {
    case MessageType::OpApplied:
    case MessageType::SelectionApplied: {
      const std::int64_t seq = message.seq.value_or(0);
      if (seq <= graph_.seq()) return Outcome::Stale;
      if (seq != graph_.seq() + 1) return Outcome::Gap;
      try {
        apply_event(op_from_json(message.payload.at("op")), message.device, seq);
      } catch (const GraphError&) {
        consistent_ = false;
        return Outcome::Gap;
      }
      if (const auto it = message.payload.find("hash"); it != message.payload.end())
        if (*it != snapshot_hash(graph_)) consistent_ = false;
      return Outcome::Applied;
    }
    case MessageType::Snapshot: {
      if (message.payload.contains("snapshot")) {
        load(message);
        return Outcome::Applied;
      }
      for (const auto& j : message.payload.at("events")) {
        const auto event = session_event_from_json(j);
        if (event.seq <= graph_.seq()) continue;
        if (event.seq != graph_.seq() + 1) return Outcome::Gap;
        apply_event(event.body, event.device, event.seq);
      }
      return Outcome::Applied;
    }
    default:
      return Outcome::Ignored;
  }
}

}  // namespace hybridsense
