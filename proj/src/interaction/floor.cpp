#include "hybridsense/interaction/floor.hpp"

#include <limits>
#include <stdexcept>

namespace hybridsense {

FloorTimeline place_timeline_on_floor(const TimelineModel& model, const FloorTimelineParams& params) {
  if (params.direction.norm() == 0.0) throw std::invalid_argument("floor timeline direction must be non-zero");
  const Vec2 along = params.direction.normalized();
  const Vec2 side(-along.y(), along.x());
  FloorTimeline floor;
  for (const auto& group : model.groups) {
    const Vec2 marker = params.origin + along * (group.marker_position * params.length);
    floor.markers.push_back({FloorMarker::Kind::dateGroup, marker, group.members});
    for (std::size_t i = 0; i < group.members.size(); ++i) {
      const double offset = params.entry_spacing * static_cast<double>(i + 1);
      floor.markers.push_back({FloorMarker::Kind::entry, marker + side * offset, {group.members[i]}});
    }
  }
  return floor;
}

std::optional<SetSelection> foot_step(const Pose& head, std::int64_t t, const FloorTimeline& timeline,
                                      FootState& state, const InteractionConfig& config) {
  const Vec2 foot(head.position.x(), head.position.z());
  std::optional<std::size_t> nearest;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < timeline.markers.size(); ++i) {
    const double d = (timeline.markers[i].position - foot).norm();
    if (d <= config.stand_radius && d < best) {
      best = d;
      nearest = i;
    }
  }
  if (nearest != state.marker) {
    state = FootState{nearest, t, false};
    return std::nullopt;
  }
  if (!nearest || state.fired || t - state.since < config.dwell_ms) return std::nullopt;
  state.fired = true;
  const auto& nodes = timeline.markers[*nearest].nodes;
  return SetSelection{std::nullopt, std::set<NodeId>(nodes.begin(), nodes.end())};
}

}  // namespace hybridsense
