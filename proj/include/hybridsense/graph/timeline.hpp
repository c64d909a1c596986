#pragma once

#include <chrono>
#include <variant>
#include <vector>

#include "hybridsense/graph/graph.hpp"

namespace hybridsense {

struct TimelineEntry {
  NodeId node;
  TimePoint time;
  bool operator==(const TimelineEntry&) const = default;
};

// One "white node" marker per calendar date. marker_position is the date's
// place on a unit-length linear axis (0 = earliest date, 1 = latest).
struct DateGroup {
  std::chrono::year_month_day date;
  double marker_position = 0.0;
  std::vector<NodeId> members;
  bool operator==(const DateGroup&) const = default;
};

struct TimelineModel {
  std::vector<TimelineEntry> entries;
  std::vector<DateGroup> groups;
  bool empty() const { return entries.empty(); }
  bool operator==(const TimelineModel&) const = default;
};

// Time nodes sorted by (timestamp, id), grouped by UTC calendar date.
TimelineModel derive_timeline(const Graph& graph);

struct SelectEntry {
  NodeId node;
};
struct SelectDateGroup {
  std::chrono::year_month_day date;
};
using TimelineTarget = std::variant<SelectEntry, SelectDateGroup>;

// Selection that results from picking a timeline entry or date marker. The
// current document selection is kept. Throws GraphError(UnknownNode) when the
// target no longer refers to a time node in the graph.
SelectionState select_timeline_entry(const TimelineTarget& target, const Graph& graph);

}  // namespace hybridsense
