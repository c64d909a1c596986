#include "hybridsense/graph/timeline.hpp"

#include <algorithm>

namespace hybridsense {

using namespace std::chrono;

TimelineModel derive_timeline(const Graph& graph) {
  TimelineModel model;
  for (const auto& [id, node] : graph.nodes())
    if (node.kind == NodeKind::time && node.parsed_time) model.entries.push_back({id, *node.parsed_time});
  std::sort(model.entries.begin(), model.entries.end(), [](const TimelineEntry& a, const TimelineEntry& b) {
    return a.time != b.time ? a.time < b.time : a.node < b.node;
  });

  for (const auto& entry : model.entries) {
    const year_month_day date{floor<days>(entry.time)};
    if (model.groups.empty() || model.groups.back().date != date) model.groups.push_back({date, 0.0, {}});
    model.groups.back().members.push_back(entry.node);
  }
  if (!model.groups.empty()) {
    const auto first = sys_days{model.groups.front().date};
    const auto span = (sys_days{model.groups.back().date} - first).count();
    for (auto& group : model.groups) {
      group.marker_position =
          span == 0 ? 0.5 : static_cast<double>((sys_days{group.date} - first).count()) / static_cast<double>(span);
    }
  }
  return model;
}

SelectionState select_timeline_entry(const TimelineTarget& target, const Graph& graph) {
  SelectionState selection = graph.selection();
  selection.selected_node_ids.clear();
  if (const auto* entry = std::get_if<SelectEntry>(&target)) {
    const auto* node = graph.find_node(entry->node);
    if (!node || node->kind != NodeKind::time) throw GraphError(GraphErrc::UnknownNode, entry->node);
    selection.selected_node_ids.insert(entry->node);
    return selection;
  }
  const auto& date = std::get<SelectDateGroup>(target).date;
  const auto model = derive_timeline(graph);
  const auto group = std::find_if(model.groups.begin(), model.groups.end(),
                                  [&](const DateGroup& g) { return g.date == date; });
  if (group == model.groups.end()) throw GraphError(GraphErrc::UnknownNode, "no time nodes on requested date");
  selection.selected_node_ids.insert(group->members.begin(), group->members.end());
  return selection;
}

}  // namespace hybridsense
