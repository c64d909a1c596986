#pragma once

#include <cstdint>

namespace hybridsense {

// Every interaction threshold lives here.
struct InteractionConfig {
  double grab_radius = 0.10;     // m, palm to node center
  double merge_radius = 0.08;    // m, between two released nodes
  double link_radius = 0.08;     // m, released node (or fingertip) to target node
  double throw_speed = 1.5;      // m/s, smoothed palm speed at release
  double pull_distance = 0.15;   // m, fingertip travel while pulling a link
  double pinch_radius = 0.05;    // m, fingertip to link midpoint or document panel
  double stand_radius = 0.25;    // m, floor distance to a timeline marker
  std::int64_t dwell_ms = 500;   // standing time before a floor selection fires
  double touch_depth = 0.015;    // m, fingertip to handheld panel plane
  double max_ray_range = 10.0;   // m

  // Throws std::invalid_argument on non-positive values.
  void validate() const;
};

}  // namespace hybridsense
