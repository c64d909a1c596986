#include "hybridsense/graph/snapshot.hpp"

#include <array>
#include <cstdio>
#include <stdexcept>

#include <openssl/evp.h>

#include "hybridsense/graph/time_label.hpp"

namespace hybridsense {

Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected a 3-element position");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json to_json(const Quat& q) { return Json::array({q.w(), q.x(), q.y(), q.z()}); }

Quat quat_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("orientation must be [w,x,y,z]");
  return Quat(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

Json to_json(const NodeRecord& node) {
  Json j;
  j["id"] = node.id;
  j["label"] = node.label;
  j["kind"] = to_string(node.kind);
  j["position"] = to_json(node.position);
  j["parsedTime"] = node.parsed_time ? Json(format_iso8601(*node.parsed_time)) : Json(nullptr);
  j["sourceDocumentIds"] = node.source_document_ids;
  j["createdByDevice"] = node.created_by_device;
  j["revision"] = node.revision;
  return j;
}

Json to_json(const LinkRecord& link) {
  Json j;
  j["id"] = link.id;
  j["sourceId"] = link.source_id;
  j["targetId"] = link.target_id;
  j["label"] = link.label;
  j["kind"] = to_string(link.kind);
  j["revision"] = link.revision;
  return j;
}

Json to_json(const SelectionState& selection) {
  Json j;
  j["selectedDocumentId"] = selection.selected_document_id ? Json(*selection.selected_document_id) : Json(nullptr);
  j["selectedNodeIds"] = selection.selected_node_ids;
  j["lastOriginDevice"] = selection.last_origin_device;
  j["seq"] = selection.seq;
  return j;
}

NodeRecord node_from_json(const Json& j) {
  NodeRecord node;
  node.id = j.at("id").get<std::string>();
  node.label = j.at("label").get<std::string>();
  node.kind = node_kind_from_string(j.at("kind").get<std::string>());
  node.position = vec3_from_json(j.at("position"));
  if (!j.at("parsedTime").is_null()) node.parsed_time = parse_iso8601(j.at("parsedTime").get<std::string>());
  node.source_document_ids = j.at("sourceDocumentIds").get<std::set<DocumentId>>();
  node.created_by_device = j.at("createdByDevice").get<std::string>();
  node.revision = j.at("revision").get<std::int64_t>();
  if ((node.kind == NodeKind::time) != node.parsed_time.has_value())
    throw std::invalid_argument("node " + node.id + ": parsedTime must be present exactly for time nodes");
  return node;
}

LinkRecord link_from_json(const Json& j) {
  LinkRecord link;
  link.id = j.at("id").get<std::string>();
  link.source_id = j.at("sourceId").get<std::string>();
  link.target_id = j.at("targetId").get<std::string>();
  link.label = j.at("label").get<std::string>();
  link.kind = link_kind_from_string(j.at("kind").get<std::string>());
  link.revision = j.at("revision").get<std::int64_t>();
  return link;
}

SelectionState selection_from_json(const Json& j) {
  SelectionState selection;
  if (const auto& doc = j.at("selectedDocumentId"); !doc.is_null()) selection.selected_document_id = doc.get<std::string>();
  selection.selected_node_ids = j.at("selectedNodeIds").get<std::set<NodeId>>();
  selection.last_origin_device = j.at("lastOriginDevice").get<std::string>();
  selection.seq = j.at("seq").get<std::int64_t>();
  return selection;
}

Json snapshot_json(const Graph& graph) {
  Json nodes = Json::array();
  for (const auto& [id, node] : graph.nodes()) nodes.push_back(to_json(node));
  Json links = Json::array();
  for (const auto& [id, link] : graph.links()) links.push_back(to_json(link));
  Json j;
  j["nodes"] = std::move(nodes);
  j["links"] = std::move(links);
  j["selections"] = to_json(graph.selection());
  j["seq"] = graph.seq();
  return j;
}

Graph graph_from_snapshot(const Json& j) {
  Graph::NodeMap nodes;
  for (const auto& entry : j.at("nodes")) {
    auto node = node_from_json(entry);
    const auto id = node.id;
    if (!nodes.emplace(id, std::move(node)).second) throw std::invalid_argument("duplicate node id " + id);
  }
  Graph::LinkMap links;
  for (const auto& entry : j.at("links")) {
    auto link = link_from_json(entry);
    if (!nodes.count(link.source_id) || !nodes.count(link.target_id))
      throw std::invalid_argument("link " + link.id + " has a dangling endpoint");
    if (link.source_id == link.target_id) throw std::invalid_argument("link " + link.id + " is a self-loop");
    const auto id = link.id;
    if (!links.emplace(id, std::move(link)).second) throw std::invalid_argument("duplicate link id " + id);
  }
  auto selection = selection_from_json(j.at("selections"));
  for (const auto& id : selection.selected_node_ids)
    if (!nodes.count(id)) throw std::invalid_argument("selection references missing node " + id);
  return Graph::from_parts(std::move(nodes), std::move(links), std::move(selection), j.at("seq").get<std::int64_t>());
}

std::string canonical_snapshot(const Graph& graph) { return snapshot_json(graph).dump(); }

std::string snapshot_hash(const Graph& graph) { return sha256_hex(canonical_snapshot(graph)); }

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  hex.reserve(length * 2);
  char pair[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(pair, sizeof pair, "%02x", digest[i]);
    hex += pair;
  }
  return hex;
}

}  // namespace hybridsense
