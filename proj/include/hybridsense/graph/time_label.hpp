#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hybridsense/graph/types.hpp"

namespace hybridsense {

// Accepted forms (whole label, surrounding whitespace ignored):
//   2007-02-20, 2007-02-20T13:45[:30][Z], 2007-02-20 13:45[:30][Z]
//   February 20, 2007 / Feb 20 2007 / Feb. 20, 2007
//   2/20/2007
//   20 February 2007 / 20 Feb 2007
// Missing time of day is midnight UTC.
std::optional<TimePoint> parse_time_label(std::string_view label);

std::string format_iso8601(TimePoint t);
// Inverse of format_iso8601; throws std::invalid_argument.
TimePoint parse_iso8601(std::string_view text);

}  // namespace hybridsense
