#include "hybridsense/graph/graph.hpp"

#include <algorithm>
#include <cctype>

#include "hybridsense/graph/time_label.hpp"

namespace hybridsense {
namespace {

bool blank(const std::string& label) {
  return std::all_of(label.begin(), label.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

void classify(NodeRecord& node) {
  node.parsed_time = parse_time_label(node.label);
  node.kind = node.parsed_time ? NodeKind::time : NodeKind::entity;
}

}  // namespace

const NodeRecord* Graph::find_node(const NodeId& id) const {
  const auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const LinkRecord* Graph::find_link(const LinkId& id) const {
  const auto it = links_.find(id);
  return it == links_.end() ? nullptr : &it->second;
}

const NodeRecord& Graph::node(const NodeId& id) const {
  if (const auto* found = find_node(id)) return *found;
  throw GraphError(GraphErrc::UnknownNode, id);
}

const LinkRecord& Graph::link(const LinkId& id) const {
  if (const auto* found = find_link(id)) return *found;
  throw GraphError(GraphErrc::UnknownLink, id);
}

NodeRecord& Graph::mutable_node(const NodeId& id) {
  const auto it = nodes_.find(id);
  if (it == nodes_.end()) throw GraphError(GraphErrc::UnknownNode, id);
  return it->second;
}

void Graph::require_not_anchor(const NodeRecord& node) const {
  if (node.kind == NodeKind::documentAnchor) throw GraphError(GraphErrc::AnchorImmutable, node.id);
}

void Graph::require_unique_link(const NodeId& a, const NodeId& b, const std::string& label,
                                const LinkId* ignore) const {
  for (const auto& [id, link] : links_) {
    if (ignore && id == *ignore) continue;
    if (link.duplicates(a, b, label)) throw GraphError(GraphErrc::DuplicateLink, id);
  }
}

void Graph::require_fresh_id(const std::string& id) const {
  if (id.empty() || nodes_.count(id) || links_.count(id)) throw GraphError(GraphErrc::DuplicateId, id);
}

CreatedNode Graph::create_node(const NodeId& id, const std::string& label, const Vec3& position,
                               const DeviceId& device, const LinkId& default_link_id) {
  if (blank(label)) throw GraphError(GraphErrc::EmptyLabel, "node label");
  require_fresh_id(id);
  const auto& document = selection_.selected_document_id;
  NodeId anchor;
  if (document) {
    anchor = anchor_id_for(*document);
    if (!nodes_.count(anchor)) throw GraphError(GraphErrc::UnknownDocument, *document);
    if (default_link_id == id) throw GraphError(GraphErrc::DuplicateId, default_link_id);
    require_fresh_id(default_link_id);
  }

  NodeRecord record;
  record.id = id;
  record.label = label;
  record.position = position;
  record.created_by_device = device;
  classify(record);
  if (document) record.source_document_ids.insert(*document);
  nodes_.emplace(id, std::move(record));

  CreatedNode created{id, std::nullopt};
  if (document) {
    links_.emplace(default_link_id, LinkRecord{default_link_id, id, anchor, "", LinkKind::documentDefault, 1});
    created.default_link = default_link_id;
  }
  return created;
}

void Graph::add_document_anchor(const DocumentId& document, const std::string& title, const Vec3& position,
                                const DeviceId& device) {
  const NodeId id = anchor_id_for(document);
  require_fresh_id(id);
  NodeRecord record;
  record.id = id;
  record.label = title;
  record.kind = NodeKind::documentAnchor;
  record.position = position;
  record.source_document_ids.insert(document);
  record.created_by_device = device;
  nodes_.emplace(id, std::move(record));
}

void Graph::update_node_label(const NodeId& id, const std::string& label) {
  NodeRecord& node = mutable_node(id);
  require_not_anchor(node);
  if (blank(label)) throw GraphError(GraphErrc::EmptyLabel, "node label");
  node.label = label;
  classify(node);
  ++node.revision;
}

void Graph::move_node(const NodeId& id, const Vec3& position) {
  NodeRecord& node = mutable_node(id);
  node.position = position;
  ++node.revision;
}

std::vector<LinkId> Graph::delete_node(const NodeId& id) {
  const NodeRecord& node = this->node(id);
  require_not_anchor(node);
  std::vector<LinkId> removed;
  for (auto it = links_.begin(); it != links_.end();) {
    if (it->second.touches(id)) {
      removed.push_back(it->first);
      it = links_.erase(it);
    } else {
      ++it;
    }
  }
  nodes_.erase(id);
  selection_.selected_node_ids.erase(id);
  return removed;
}

std::vector<LinkId> Graph::merge_nodes(const NodeId& survivor_id, const NodeId& absorbed_id) {
  if (survivor_id == absorbed_id) throw GraphError(GraphErrc::SelfMerge, survivor_id);
  const NodeRecord& survivor = node(survivor_id);
  const NodeRecord& absorbed = node(absorbed_id);
  require_not_anchor(survivor);
  require_not_anchor(absorbed);

  std::vector<LinkId> dropped;
  // Links of the absorbed node are visited in id order; a retargeted link that
  // duplicates one already incident to the survivor is dropped.
  for (auto& [id, link] : links_) {
    if (!link.touches(absorbed_id)) continue;
    const NodeId other = link.source_id == absorbed_id ? link.target_id : link.source_id;
    if (other == survivor_id || other == absorbed_id) {
      dropped.push_back(id);
      continue;
    }
    bool duplicate = false;
    for (const auto& [other_id, existing] : links_) {
      if (other_id == id || existing.touches(absorbed_id)) continue;
      if (existing.duplicates(survivor_id, other, link.label)) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) {
      dropped.push_back(id);
      continue;
    }
    if (link.source_id == absorbed_id) link.source_id = survivor_id;
    if (link.target_id == absorbed_id) link.target_id = survivor_id;
    ++link.revision;
  }
  for (const auto& id : dropped) links_.erase(id);

  NodeRecord& kept = mutable_node(survivor_id);
  const auto absorbed_docs = nodes_.at(absorbed_id).source_document_ids;
  kept.source_document_ids.insert(absorbed_docs.begin(), absorbed_docs.end());
  ++kept.revision;
  nodes_.erase(absorbed_id);
  if (selection_.selected_node_ids.erase(absorbed_id) > 0) selection_.selected_node_ids.insert(survivor_id);
  return dropped;
}

void Graph::create_link(const LinkId& id, const NodeId& source, const NodeId& target, const std::string& label,
                        LinkKind kind) {
  node(source);
  node(target);
  if (source == target) throw GraphError(GraphErrc::SelfLink, source);
  require_unique_link(source, target, label, nullptr);
  require_fresh_id(id);
  links_.emplace(id, LinkRecord{id, source, target, label, kind, 1});
}

void Graph::update_link_label(const LinkId& id, const std::string& label) {
  const auto it = links_.find(id);
  if (it == links_.end()) throw GraphError(GraphErrc::UnknownLink, id);
  require_unique_link(it->second.source_id, it->second.target_id, label, &id);
  it->second.label = label;
  ++it->second.revision;
}

void Graph::delete_link(const LinkId& id) {
  if (links_.erase(id) == 0) throw GraphError(GraphErrc::UnknownLink, id);
}

void Graph::set_selection(const std::optional<DocumentId>& document, const std::set<NodeId>& nodes,
                          const DeviceId& origin, std::int64_t seq) {
  if (document && !nodes_.count(anchor_id_for(*document))) throw GraphError(GraphErrc::UnknownDocument, *document);
  for (const auto& id : nodes) node(id);
  selection_.selected_document_id = document;
  selection_.selected_node_ids = nodes;
  selection_.last_origin_device = origin;
  selection_.seq = seq;
}

Graph Graph::from_parts(NodeMap nodes, LinkMap links, SelectionState selection, std::int64_t seq) {
  Graph graph;
  graph.nodes_ = std::move(nodes);
  graph.links_ = std::move(links);
  graph.selection_ = std::move(selection);
  graph.seq_ = seq;
  return graph;
}

}  // namespace hybridsense
