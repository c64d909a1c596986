#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hybridsense/graph/types.hpp"

namespace hybridsense {

struct CreatedNode {
  NodeId node;
  std::optional<LinkId> default_link;
};

// The replicated sensemaking document. A copyable value: every mutation either
// validates and applies completely or throws GraphError leaving the graph untouched.
// Sequencing is external; seq() is only stamped by the sync layer.
class Graph {
 public:
  using NodeMap = std::map<NodeId, NodeRecord>;
  using LinkMap = std::map<LinkId, LinkRecord>;

  const NodeMap& nodes() const noexcept { return nodes_; }
  const LinkMap& links() const noexcept { return links_; }
  const SelectionState& selection() const noexcept { return selection_; }
  std::int64_t seq() const noexcept { return seq_; }
  void set_seq(std::int64_t seq) noexcept { seq_ = seq; }

  const NodeRecord* find_node(const NodeId& id) const;
  const LinkRecord* find_link(const LinkId& id) const;
  const NodeRecord& node(const NodeId& id) const;
  const LinkRecord& link(const LinkId& id) const;

  // Creates a node whose kind follows the label. If a document is selected,
  // also creates a documentDefault link (id `default_link_id`) to its anchor.
  CreatedNode create_node(const NodeId& id, const std::string& label, const Vec3& position,
                          const DeviceId& device, const LinkId& default_link_id);

  // System-created node for a document; exactly one per document.
  void add_document_anchor(const DocumentId& document, const std::string& title,
                           const Vec3& position, const DeviceId& device);

  void update_node_label(const NodeId& id, const std::string& label);
  void move_node(const NodeId& id, const Vec3& position);
  // Returns the ids of links removed by the cascade.
  std::vector<LinkId> delete_node(const NodeId& id);
  // Returns the ids of absorbed-node links that were dropped (self-loops or duplicates).
  std::vector<LinkId> merge_nodes(const NodeId& survivor, const NodeId& absorbed);

  void create_link(const LinkId& id, const NodeId& source, const NodeId& target,
                   const std::string& label, LinkKind kind = LinkKind::user);
  void update_link_label(const LinkId& id, const std::string& label);
  void delete_link(const LinkId& id);

  // Replaces the session selection. Node ids must exist and the document, if any,
  // must have an anchor.
  void set_selection(const std::optional<DocumentId>& document, const std::set<NodeId>& nodes,
                     const DeviceId& origin, std::int64_t seq);

  // Restores a graph from already-validated records (snapshot loading).
  static Graph from_parts(NodeMap nodes, LinkMap links, SelectionState selection, std::int64_t seq);

  bool operator==(const Graph&) const = default;

 private:
  NodeRecord& mutable_node(const NodeId& id);
  void require_not_anchor(const NodeRecord& node) const;
  void require_unique_link(const NodeId& a, const NodeId& b, const std::string& label,
                           const LinkId* ignore) const;
  void require_fresh_id(const std::string& id) const;

  NodeMap nodes_;
  LinkMap links_;
  SelectionState selection_;
  std::int64_t seq_ = 0;
};

}  // namespace hybridsense
