#include "hybridsense/sync/event_log.hpp"

#include <string>

namespace hybridsense {

JsonlWriter::JsonlWriter(const std::filesystem::path& path, bool truncate)
    : path_(path), out_(path, std::ios::binary | (truncate ? std::ios::trunc : std::ios::app)) {
  if (!out_) throw std::runtime_error("cannot open log for writing: " + path.string());
}

void JsonlWriter::append(const Json& record) {
  const std::lock_guard lock(mutex_);
  out_ << record.dump() << '\n';
  out_.flush();
}

void JsonlWriter::flush() {
  const std::lock_guard lock(mutex_);
  out_.flush();
}

std::vector<SessionEvent> read_event_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReplayError("cannot open event log " + path.string(), 0, 0);
  std::vector<SessionEvent> events;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::int64_t last_good = events.empty() ? 0 : events.back().seq;
    SessionEvent event;
    try {
      event = session_event_from_json(Json::parse(line));
    } catch (const std::exception& e) {
      throw ReplayError("event log line " + std::to_string(line_number) + " is corrupt after seq " +
                            std::to_string(last_good) + ": " + e.what(),
                        last_good, line_number);
    }
    if (event.seq != last_good + 1) {
      throw ReplayError("event log line " + std::to_string(line_number) + " has seq " + std::to_string(event.seq) +
                            ", expected " + std::to_string(last_good + 1),
                        last_good, line_number);
    }
    events.push_back(std::move(event));
  }
  return events;
}

std::vector<PoseSample> read_pose_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReplayError("cannot open pose log " + path.string(), 0, 0);
  std::vector<PoseSample> samples;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      samples.push_back(pose_sample_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw ReplayError("pose log line " + std::to_string(line_number) + " is corrupt: " + e.what(), 0, line_number);
    }
  }
  return samples;
}

Graph replay_events(std::span<const SessionEvent> events) {
  Graph graph;
  for (const auto& event : events) {
    try {
      apply_op(graph, event.body, event.device, event.seq);
    } catch (const GraphError& e) {
      throw ReplayError("event " + std::to_string(event.seq) + " does not apply: " + e.what(), graph.seq(), 0);
    }
  }
  return graph;
}

Graph persist_and_replay(const std::filesystem::path& log_path) {
  const auto events = read_event_log(log_path);
  return replay_events(events);
}

}  // namespace hybridsense
