#include "hybridsense/graph/time_label.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace hybridsense {
namespace {

using namespace std::chrono;

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool done() const { return pos == text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  void skip_spaces() {
    while (!done() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  // Reads between min_digits and max_digits decimal digits.
  std::optional<int> digits(std::size_t min_digits, std::size_t max_digits) {
    std::size_t start = pos;
    int value = 0;
    while (!done() && pos - start < max_digits && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + (text[pos] - '0');
      ++pos;
    }
    if (pos - start < min_digits) {
      pos = start;
      return std::nullopt;
    }
    // Reject a longer digit run than allowed.
    if (!done() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      pos = start;
      return std::nullopt;
    }
    return value;
  }
  std::string_view word() {
    std::size_t start = pos;
    while (!done() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  }
};

constexpr std::array<std::string_view, 12> kMonthNames = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

std::optional<int> month_from_name(std::string_view word) {
  std::string lower;
  for (const char c : word) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (std::size_t i = 0; i < kMonthNames.size(); ++i) {
    if (lower == kMonthNames[i] || lower == kMonthNames[i].substr(0, 3)) return static_cast<int>(i) + 1;
  }
  if (lower == "sept") return 9;
  return std::nullopt;
}

std::optional<TimePoint> make_instant(int y, int m, int d, int hh = 0, int mm = 0, int ss = 0) {
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) return std::nullopt;
  return TimePoint{sys_days{ymd}} + hours{hh} + minutes{mm} + seconds{ss};
}

// YYYY-MM-DD with optional [T| ]HH:MM[:SS][Z]
std::optional<TimePoint> parse_iso(Cursor c) {
  const auto y = c.digits(4, 4);
  if (!y || !c.eat('-')) return std::nullopt;
  const auto m = c.digits(2, 2);
  if (!m || !c.eat('-')) return std::nullopt;
  const auto d = c.digits(2, 2);
  if (!d) return std::nullopt;
  if (c.done()) return make_instant(*y, *m, *d);
  if (!c.eat('T') && !c.eat(' ')) return std::nullopt;
  const auto hh = c.digits(2, 2);
  if (!hh || !c.eat(':')) return std::nullopt;
  const auto mm = c.digits(2, 2);
  if (!mm) return std::nullopt;
  int ss = 0;
  if (c.eat(':')) {
    const auto s = c.digits(2, 2);
    if (!s) return std::nullopt;
    ss = *s;
  }
  c.eat('Z');
  if (!c.done()) return std::nullopt;
  return make_instant(*y, *m, *d, *hh, *mm, ss);
}

// Month D, YYYY
std::optional<TimePoint> parse_month_first(Cursor c) {
  const auto month = month_from_name(c.word());
  if (!month) return std::nullopt;
  c.eat('.');
  c.skip_spaces();
  const auto d = c.digits(1, 2);
  if (!d) return std::nullopt;
  c.eat(',');
  c.skip_spaces();
  const auto y = c.digits(4, 4);
  if (!y || !c.done()) return std::nullopt;
  return make_instant(*y, *month, *d);
}

// M/D/YYYY
std::optional<TimePoint> parse_slashed(Cursor c) {
  const auto m = c.digits(1, 2);
  if (!m || !c.eat('/')) return std::nullopt;
  const auto d = c.digits(1, 2);
  if (!d || !c.eat('/')) return std::nullopt;
  const auto y = c.digits(4, 4);
  if (!y || !c.done()) return std::nullopt;
  if (*m < 1 || *m > 12) return std::nullopt;
  return make_instant(*y, *m, *d);
}

// D Month YYYY
std::optional<TimePoint> parse_day_first(Cursor c) {
  const auto d = c.digits(1, 2);
  if (!d) return std::nullopt;
  c.skip_spaces();
  const auto month = month_from_name(c.word());
  if (!month) return std::nullopt;
  c.eat('.');
  c.eat(',');
  c.skip_spaces();
  const auto y = c.digits(4, 4);
  if (!y || !c.done()) return std::nullopt;
  return make_instant(*y, *month, *d);
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

}  // namespace

std::optional<TimePoint> parse_time_label(std::string_view label) {
  const Cursor cursor{trim(label)};
  if (cursor.text.empty()) return std::nullopt;
  if (std::isalpha(static_cast<unsigned char>(cursor.text.front()))) return parse_month_first(cursor);
  if (auto t = parse_iso(cursor)) return t;
  if (auto t = parse_slashed(cursor)) return t;
  return parse_day_first(cursor);
}

std::string format_iso8601(TimePoint t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss<Millis> tod{t - day_point};
  char buffer[40];
  const auto ms = tod.subseconds().count();
  if (ms == 0) {
    std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(tod.hours().count()), static_cast<long long>(tod.minutes().count()),
                  static_cast<long long>(tod.seconds().count()));
  } else {
    std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(tod.hours().count()), static_cast<long long>(tod.minutes().count()),
                  static_cast<long long>(tod.seconds().count()), static_cast<long long>(ms));
  }
  return buffer;
}

TimePoint parse_iso8601(std::string_view text) {
  // The canonical form carries seconds and an optional millisecond fraction.
  if (text.size() >= 24 && text[19] == '.') {
    const std::string head = std::string(text.substr(0, 19)) + "Z";
    const auto base = parse_iso(Cursor{head});
    Cursor frac{text.substr(20)};
    const auto ms = frac.digits(3, 3);
    if (!base || !ms || !frac.eat('Z') || !frac.done()) throw std::invalid_argument("bad timestamp: " + std::string(text));
    return *base + Millis{*ms};
  }
  const auto t = parse_iso(Cursor{text});
  if (!t) throw std::invalid_argument("bad timestamp: " + std::string(text));
  return *t;
}

}  // namespace hybridsense
