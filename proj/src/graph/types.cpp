#include "hybridsense/graph/types.hpp"

#include <cctype>

namespace hybridsense {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::entity: return "entity";
    case NodeKind::time: return "time";
    case NodeKind::documentAnchor: return "documentAnchor";
  }
  return "entity";
}

std::string_view to_string(LinkKind kind) {
  return kind == LinkKind::user ? "user" : "documentDefault";
}

std::string_view to_string(DeviceKind kind) { return kind == DeviceKind::pc ? "pc" : "vr"; }

NodeKind node_kind_from_string(std::string_view text) {
  if (text == "entity") return NodeKind::entity;
  if (text == "time") return NodeKind::time;
  if (text == "documentAnchor") return NodeKind::documentAnchor;
  throw std::invalid_argument("unknown node kind: " + std::string(text));
}

LinkKind link_kind_from_string(std::string_view text) {
  if (text == "user") return LinkKind::user;
  if (text == "documentDefault") return LinkKind::documentDefault;
  throw std::invalid_argument("unknown link kind: " + std::string(text));
}

DeviceKind device_kind_from_string(std::string_view text) {
  if (text == "pc") return DeviceKind::pc;
  if (text == "vr") return DeviceKind::vr;
  throw std::invalid_argument("unknown device kind: " + std::string(text));
}

std::string_view node_color(NodeKind kind) {
  switch (kind) {
    case NodeKind::entity: return "blue";
    case NodeKind::time: return "orange";
    case NodeKind::documentAnchor: return "black";
  }
  return "blue";
}

std::int64_t count_words(std::string_view text) {
  std::int64_t count = 0;
  bool in_word = false;
  for (const char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

std::string_view to_string(GraphErrc code) {
  switch (code) {
    case GraphErrc::EmptyLabel: return "EmptyLabel";
    case GraphErrc::UnknownNode: return "UnknownNode";
    case GraphErrc::UnknownLink: return "UnknownLink";
    case GraphErrc::UnknownDocument: return "UnknownDocument";
    case GraphErrc::AnchorImmutable: return "AnchorImmutable";
    case GraphErrc::SelfMerge: return "SelfMerge";
    case GraphErrc::SelfLink: return "SelfLink";
    case GraphErrc::DuplicateLink: return "DuplicateLink";
    case GraphErrc::DuplicateId: return "DuplicateId";
  }
  return "Unknown";
}

GraphError::GraphError(GraphErrc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

NodeId anchor_id_for(const DocumentId& document) { return "anchor:" + document; }

}  // namespace hybridsense
