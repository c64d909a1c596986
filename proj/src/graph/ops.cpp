#include "hybridsense/graph/ops.hpp"

#include <stdexcept>

namespace hybridsense {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string str(const Json& j, const char* key) { return j.at(key).get<std::string>(); }

std::string str_or_empty(const Json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? std::string{} : it->get<std::string>();
}

}  // namespace

std::string_view op_type(const Op& op) {
  return std::visit(Overloaded{
                        [](const AddNode&) { return std::string_view("addNode"); },
                        [](const UpdateNode&) { return std::string_view("updateNode"); },
                        [](const MoveNode&) { return std::string_view("moveNode"); },
                        [](const RemoveNode&) { return std::string_view("removeNode"); },
                        [](const MergeNodes&) { return std::string_view("mergeNodes"); },
                        [](const AddLink&) { return std::string_view("addLink"); },
                        [](const UpdateLink&) { return std::string_view("updateLink"); },
                        [](const RemoveLink&) { return std::string_view("removeLink"); },
                        [](const SetSelection&) { return std::string_view("setSelection"); },
                        [](const AddAnchor&) { return std::string_view("addAnchor"); },
                    },
                    op);
}

bool is_selection(const Op& op) { return std::holds_alternative<SetSelection>(op); }

Json to_json(const Op& op) {
  Json j = std::visit(
      Overloaded{
          [](const AddNode& o) {
            return Json{{"id", o.id}, {"label", o.label}, {"position", to_json(o.position)},
                        {"defaultLinkId", o.default_link_id}};
          },
          [](const UpdateNode& o) { return Json{{"id", o.id}, {"label", o.label}}; },
          [](const MoveNode& o) { return Json{{"id", o.id}, {"position", to_json(o.position)}}; },
          [](const RemoveNode& o) { return Json{{"id", o.id}}; },
          [](const MergeNodes& o) { return Json{{"survivor", o.survivor}, {"absorbed", o.absorbed}}; },
          [](const AddLink& o) {
            return Json{{"id", o.id}, {"source", o.source}, {"target", o.target}, {"label", o.label}};
          },
          [](const UpdateLink& o) { return Json{{"id", o.id}, {"label", o.label}}; },
          [](const RemoveLink& o) { return Json{{"id", o.id}}; },
          [](const SetSelection& o) {
            return Json{{"documentId", o.document ? Json(*o.document) : Json(nullptr)}, {"nodeIds", o.nodes}};
          },
          [](const AddAnchor& o) {
            return Json{{"documentId", o.document}, {"title", o.title}, {"position", to_json(o.position)}};
          },
      },
      op);
  j["type"] = op_type(op);
  return j;
}

Op op_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("operation must be an object");
  const auto type = str(j, "type");
  if (type == "addNode")
    return AddNode{str_or_empty(j, "id"), str(j, "label"), vec3_from_json(j.at("position")),
                   str_or_empty(j, "defaultLinkId")};
  if (type == "updateNode") return UpdateNode{str(j, "id"), str(j, "label")};
  if (type == "moveNode") return MoveNode{str(j, "id"), vec3_from_json(j.at("position"))};
  if (type == "removeNode") return RemoveNode{str(j, "id")};
  if (type == "mergeNodes") return MergeNodes{str(j, "survivor"), str(j, "absorbed")};
  if (type == "addLink") return AddLink{str_or_empty(j, "id"), str(j, "source"), str(j, "target"), str_or_empty(j, "label")};
  if (type == "updateLink") return UpdateLink{str(j, "id"), str(j, "label")};
  if (type == "removeLink") return RemoveLink{str(j, "id")};
  if (type == "setSelection") {
    SetSelection s;
    if (const auto it = j.find("documentId"); it != j.end() && !it->is_null()) s.document = it->get<std::string>();
    if (const auto it = j.find("nodeIds"); it != j.end()) s.nodes = it->get<std::set<NodeId>>();
    return s;
  }
  if (type == "addAnchor") return AddAnchor{str(j, "documentId"), str(j, "title"), vec3_from_json(j.at("position"))};
  throw std::invalid_argument("unknown operation type: " + type);
}

void assign_ids(Op& op, std::int64_t seq) {
  const auto suffix = std::to_string(seq);
  if (auto* add = std::get_if<AddNode>(&op)) {
    add->id = "n" + suffix;
    add->default_link_id = "l" + suffix;
  } else if (auto* link = std::get_if<AddLink>(&op)) {
    link->id = "l" + suffix;
  }
}

ApplyEffect apply_op(Graph& graph, const Op& op, const DeviceId& device, std::int64_t seq) {
  ApplyEffect effect;
  std::visit(Overloaded{
                 [&](const AddNode& o) {
                   const auto created = graph.create_node(o.id, o.label, o.position, device, o.default_link_id);
                   effect.touched_nodes.push_back(created.node);
                   if (created.default_link) effect.touched_links.push_back(*created.default_link);
                 },
                 [&](const UpdateNode& o) {
                   graph.update_node_label(o.id, o.label);
                   effect.touched_nodes.push_back(o.id);
                 },
                 [&](const MoveNode& o) {
                   graph.move_node(o.id, o.position);
                   effect.touched_nodes.push_back(o.id);
                 },
                 [&](const RemoveNode& o) {
                   effect.removed_links = graph.delete_node(o.id);
                   effect.removed_nodes.push_back(o.id);
                 },
                 [&](const MergeNodes& o) {
                   std::vector<LinkId> retargeted;
                   for (const auto& [id, link] : graph.links())
                     if (link.touches(o.absorbed)) retargeted.push_back(id);
                   effect.removed_links = graph.merge_nodes(o.survivor, o.absorbed);
                   for (const auto& id : retargeted)
                     if (graph.find_link(id)) effect.touched_links.push_back(id);
                   effect.touched_nodes.push_back(o.survivor);
                   effect.removed_nodes.push_back(o.absorbed);
                 },
                 [&](const AddLink& o) {
                   graph.create_link(o.id, o.source, o.target, o.label);
                   effect.touched_links.push_back(o.id);
                 },
                 [&](const UpdateLink& o) {
                   graph.update_link_label(o.id, o.label);
                   effect.touched_links.push_back(o.id);
                 },
                 [&](const RemoveLink& o) {
                   graph.delete_link(o.id);
                   effect.removed_links.push_back(o.id);
                 },
                 [&](const SetSelection& o) { graph.set_selection(o.document, o.nodes, device, seq); },
                 [&](const AddAnchor& o) {
                   graph.add_document_anchor(o.document, o.title, o.position, device);
                   effect.touched_nodes.push_back(anchor_id_for(o.document));
                 },
             },
             op);
  graph.set_seq(seq);
  return effect;
}

Json effect_json(const Graph& graph, const ApplyEffect& effect) {
  Json nodes = Json::array();
  for (const auto& id : effect.touched_nodes)
    if (const auto* node = graph.find_node(id)) nodes.push_back(to_json(*node));
  Json links = Json::array();
  for (const auto& id : effect.touched_links)
    if (const auto* link = graph.find_link(id)) links.push_back(to_json(*link));
  return Json{{"nodes", nodes}, {"links", links}, {"removedNodes", effect.removed_nodes},
              {"removedLinks", effect.removed_links}};
}

}  // namespace hybridsense
