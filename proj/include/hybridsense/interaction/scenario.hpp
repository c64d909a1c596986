#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hybridsense/interaction/gesture.hpp"
#include "hybridsense/sync/tcp.hpp"

namespace hybridsense {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SubmitAction {
  Op op;
};
struct SelectAction {
  std::optional<DocumentId> document;
  std::set<NodeId> nodes;
};
struct PoseAction {
  PoseSample sample;
};
// Streams poses at `hz` for `duration_ms`, starting at the action time.
struct PoseFloodAction {
  PoseKind kind = PoseKind::head;
  double hz = 90.0;
  std::int64_t duration_ms = 1000;
  Vec3 position = Vec3(0, 1.6, 0);
};
struct FramesAction {
  std::vector<HandFrame> frames;
};
// Waits until every earlier apply has reached this client.
struct BarrierAction {};

using ScenarioStep = std::variant<SubmitAction, SelectAction, PoseAction, PoseFloodAction, FramesAction, BarrierAction>;

struct ScenarioAction {
  std::int64_t at = 0;  // ms from scenario start
  ScenarioStep step;
};

struct ScenarioClient {
  DeviceId device;
  DeviceKind kind = DeviceKind::pc;
  std::vector<ScenarioAction> actions;
};

// Post-conditions checked on every client replica after quiescence.
struct Expectation {
  std::string type;  // converged, gapFree, seq, nodeCount, linkCount, node, noNode, selection, error, noErrors
  Json args = Json::object();
};

struct Scenario {
  std::string session = "default";
  std::vector<ScenarioClient> clients;
  std::vector<Expectation> expect;
  InteractionConfig interaction;
};

// Strict: unknown fields, types or ops raise ScenarioError. `base` resolves
// relative "frameFile" paths (JSONL of hand frames).
Scenario scenario_from_json(const Json& j, const std::filesystem::path& base = {});
Scenario load_scenario(const std::filesystem::path& path);

struct TranscriptEntry {
  DeviceId device;
  Message message;
};

struct ExpectationResult {
  std::string description;
  bool passed = false;
  std::string detail;
};

struct ScenarioResult {
  std::vector<TranscriptEntry> transcript;
  std::vector<ExpectationResult> results;
  std::map<DeviceId, std::string> hashes;
  bool passed() const;
};

// Connects one client per scenario client, runs them concurrently against the
// server, waits for quiescence and evaluates the expectations.
ScenarioResult run_scenario(const Scenario& scenario, const Endpoint& server);

Json to_json(const ScenarioResult& result);

}  // namespace hybridsense
