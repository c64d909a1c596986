#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hybridsense/geometry.hpp"

namespace hybridsense {

using NodeId = std::string;
using LinkId = std::string;
using DeviceId = std::string;
using DocumentId = std::string;

using Millis = std::chrono::milliseconds;
using TimePoint = std::chrono::sys_time<Millis>;

enum class NodeKind { entity, time, documentAnchor };
enum class LinkKind { user, documentDefault };
enum class DeviceKind { pc, vr };

std::string_view to_string(NodeKind kind);
std::string_view to_string(LinkKind kind);
std::string_view to_string(DeviceKind kind);
NodeKind node_kind_from_string(std::string_view text);
LinkKind link_kind_from_string(std::string_view text);
DeviceKind device_kind_from_string(std::string_view text);

// Render color is derived from the kind and never stored.
std::string_view node_color(NodeKind kind);

struct NodeRecord {
  NodeId id;
  std::string label;
  NodeKind kind = NodeKind::entity;
  Vec3 position = Vec3::Zero();
  std::optional<TimePoint> parsed_time;
  std::set<DocumentId> source_document_ids;
  DeviceId created_by_device;
  std::int64_t revision = 1;

  bool operator==(const NodeRecord&) const = default;
};

struct LinkRecord {
  LinkId id;
  NodeId source_id;
  NodeId target_id;
  std::string label;
  LinkKind kind = LinkKind::user;
  std::int64_t revision = 1;

  bool operator==(const LinkRecord&) const = default;

  bool touches(const NodeId& node) const { return source_id == node || target_id == node; }
  // Same unordered endpoint pair and identical label.
  bool duplicates(const NodeId& a, const NodeId& b, std::string_view other_label) const {
    const bool same_pair = (source_id == a && target_id == b) || (source_id == b && target_id == a);
    return same_pair && label == other_label;
  }
};

struct SelectionState {
  std::optional<DocumentId> selected_document_id;
  std::set<NodeId> selected_node_ids;
  DeviceId last_origin_device;
  std::int64_t seq = 0;

  bool operator==(const SelectionState&) const = default;
};

struct DocumentRecord {
  DocumentId id;
  std::string title;
  std::string body;
  std::string subplot;
  std::int64_t word_count = 0;
};

std::int64_t count_words(std::string_view text);

enum class GraphErrc {
  EmptyLabel,
  UnknownNode,
  UnknownLink,
  UnknownDocument,
  AnchorImmutable,
  SelfMerge,
  SelfLink,
  DuplicateLink,
  DuplicateId,
};

std::string_view to_string(GraphErrc code);

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrc code, const std::string& detail);
  GraphErrc code() const noexcept { return code_; }

 private:
  GraphErrc code_;
};

// Anchor nodes use a fixed id derived from their document.
NodeId anchor_id_for(const DocumentId& document);

}  // namespace hybridsense
