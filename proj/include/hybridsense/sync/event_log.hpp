#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "hybridsense/sync/protocol.hpp"

namespace hybridsense {

class ReplayError : public std::runtime_error {
 public:
  ReplayError(const std::string& what, std::int64_t last_good_seq, std::size_t line)
      : std::runtime_error(what), last_good_seq_(last_good_seq), line_(line) {}
  std::int64_t last_good_seq() const noexcept { return last_good_seq_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::int64_t last_good_seq_;
  std::size_t line_;
};

// Appends one JSON document per line and flushes after every write, so a crash
// loses at most the line being written.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path, bool truncate = true);
  void append(const Json& record);
  void flush();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mutex_;
};

// Reads a gap-free event log starting at seq 1. Throws ReplayError naming the
// last good seq on unparsable lines or sequence gaps.
std::vector<SessionEvent> read_event_log(const std::filesystem::path& path);

// Malformed lines throw ReplayError with the line number; last_good_seq is 0.
std::vector<PoseSample> read_pose_log(const std::filesystem::path& path);

// Applies events to the empty graph. Throws ReplayError if an event fails.
Graph replay_events(std::span<const SessionEvent> events);

// read_event_log + replay_events.
Graph persist_and_replay(const std::filesystem::path& log_path);

}  // namespace hybridsense
