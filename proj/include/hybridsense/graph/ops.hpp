#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hybridsense/graph/graph.hpp"
#include "hybridsense/graph/snapshot.hpp"

namespace hybridsense {

// Id fields are empty in client requests; the server fills them in before the
// operation is applied and logged.
struct AddNode {
  NodeId id;
  std::string label;
  Vec3 position = Vec3::Zero();
  LinkId default_link_id;
};
struct UpdateNode {
  NodeId id;
  std::string label;
};
struct MoveNode {
  NodeId id;
  Vec3 position = Vec3::Zero();
};
struct RemoveNode {
  NodeId id;
};
struct MergeNodes {
  NodeId survivor;
  NodeId absorbed;
};
struct AddLink {
  LinkId id;
  NodeId source;
  NodeId target;
  std::string label;
};
struct UpdateLink {
  LinkId id;
  std::string label;
};
struct RemoveLink {
  LinkId id;
};
struct SetSelection {
  std::optional<DocumentId> document;
  std::set<NodeId> nodes;
};
struct AddAnchor {
  DocumentId document;
  std::string title;
  Vec3 position = Vec3::Zero();
};

using Op = std::variant<AddNode, UpdateNode, MoveNode, RemoveNode, MergeNodes, AddLink, UpdateLink, RemoveLink,
                        SetSelection, AddAnchor>;

// Wire name of the operation ("addNode", "setSelection", ...).
std::string_view op_type(const Op& op);
bool is_selection(const Op& op);

Json to_json(const Op& op);
// Throws std::invalid_argument on unknown types or missing fields.
Op op_from_json(const Json& j);

// Fills server-assigned ids from the sequence number that will apply the op.
void assign_ids(Op& op, std::int64_t seq);

struct ApplyEffect {
  std::vector<NodeId> touched_nodes;
  std::vector<LinkId> touched_links;
  std::vector<NodeId> removed_nodes;
  std::vector<LinkId> removed_links;
};

// Applies one sequenced operation and stamps graph.seq. Throws GraphError with
// the graph unchanged.
ApplyEffect apply_op(Graph& graph, const Op& op, const DeviceId& device, std::int64_t seq);

// Records touched by an apply, for OpApplied payloads.
Json effect_json(const Graph& graph, const ApplyEffect& effect);

}  // namespace hybridsense
