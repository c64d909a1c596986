#pragma once

#include "hybridsense/sync/protocol.hpp"

namespace hybridsense {

// Client-side mirror of the session graph, fed by server messages.
class Replica {
 public:
  enum class Outcome { Applied, Ignored, Stale, Gap };

  // Welcome or full Snapshot.
  void load(const Message& message);
  // OpApplied, SelectionApplied or a Snapshot reply; anything else is Ignored.
  // A Gap means an apply was missed and the caller should resync from seq().
  Outcome apply(const Message& message);

  const Graph& graph() const { return graph_; }
  std::int64_t seq() const { return graph_.seq(); }
  // False once any server-advertised hash disagreed with the local state.
  bool consistent() const { return consistent_; }
  const Json& corpus() const { return corpus_; }

 private:
  void apply_event(const Op& op, const DeviceId& device, std::int64_t seq);

  Graph graph_;
  Json corpus_ = Json::object();
  bool consistent_ = true;
};

}  // namespace hybridsense
