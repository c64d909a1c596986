#pragma once

#include <optional>
#include <vector>

#include "hybridsense/graph/ops.hpp"
#include "hybridsense/graph/timeline.hpp"
#include "hybridsense/interaction/config.hpp"

namespace hybridsense {

// Where the timeline is laid on the floor: date markers along `direction`
// from `origin`; entries of a date sit beside its marker, stepping sideways.
struct FloorTimelineParams {
  Vec2 origin = Vec2(-2.0, 1.0);  // floor (x, z)
  Vec2 direction = Vec2(1.0, 0.0);
  double length = 4.0;            // m, first to last date
  double entry_spacing = 0.6;     // m, sideways between entries
};

struct FloorMarker {
  enum class Kind { entry, dateGroup };
  Kind kind = Kind::entry;
  Vec2 position = Vec2::Zero();
  std::vector<NodeId> nodes;  // one id for entries, all members for a group
};

struct FloorTimeline {
  std::vector<FloorMarker> markers;
};

FloorTimeline place_timeline_on_floor(const TimelineModel& model, const FloorTimelineParams& params = {});

struct FootState {
  std::optional<std::size_t> marker;
  std::int64_t since = 0;
  bool fired = false;
};

// Head position dropped to the floor (x, z). Standing within stand_radius of
// the nearest marker for dwell_ms selects it, once per stay.
std::optional<SetSelection> foot_step(const Pose& head, std::int64_t t, const FloorTimeline& timeline,
                                      FootState& state, const InteractionConfig& config = {});

}  // namespace hybridsense
