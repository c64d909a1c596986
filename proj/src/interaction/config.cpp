#include "hybridsense/interaction/config.hpp"

#include <stdexcept>
#include <string>

namespace hybridsense {

void InteractionConfig::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(grab_radius, "grab radius");
  positive(merge_radius, "merge radius");
  positive(link_radius, "link radius");
  positive(throw_speed, "throw speed");
  positive(pull_distance, "pull distance");
  positive(pinch_radius, "pinch radius");
  positive(stand_radius, "stand radius");
  positive(static_cast<double>(dwell_ms), "dwell");
  positive(touch_depth, "touch depth");
  positive(max_ray_range, "ray range");
}

}  // namespace hybridsense
