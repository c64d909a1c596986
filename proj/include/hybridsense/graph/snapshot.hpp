#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "hybridsense/graph/graph.hpp"

namespace hybridsense {

using Json = nlohmann::json;

Json to_json(const Vec3& v);
Vec3 vec3_from_json(const Json& j);
// Quaternions are [w, x, y, z].
Json to_json(const Quat& q);
Quat quat_from_json(const Json& j);

Json to_json(const NodeRecord& node);
Json to_json(const LinkRecord& link);
Json to_json(const SelectionState& selection);
NodeRecord node_from_json(const Json& j);
LinkRecord link_from_json(const Json& j);
SelectionState selection_from_json(const Json& j);

// Canonical snapshot object: {links, nodes, selections, seq}. Object keys are
// sorted lexicographically and arrays are ordered by id.
Json snapshot_json(const Graph& graph);
Graph graph_from_snapshot(const Json& j);

// Serialized canonical snapshot; byte-stable for equal graphs.
std::string canonical_snapshot(const Graph& graph);

// Hex SHA-256 of canonical_snapshot.
std::string snapshot_hash(const Graph& graph);

std::string sha256_hex(const std::string& bytes);

}  // namespace hybridsense
