#include "hybridsense/analytics/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace hybridsense {
namespace {

constexpr std::array kCountedOps{"addAnchor", "addLink", "addNode", "mergeNodes", "moveNode", "removeLink",
                                 "removeNode", "setSelection", "updateLink", "updateNode"};

std::map<std::string, std::int64_t> empty_counts() {
  std::map<std::string, std::int64_t> counts;
  for (const auto* op : kCountedOps) counts[op] = 0;
  return counts;
}

std::optional<double> midpoint(const std::vector<UsageSegment>& segments, DeviceKind device) {
  double total = 0.0;
  for (const auto& s : segments)
    if (s.device == device) total += static_cast<double>(s.duration());
  if (total <= 0.0) return std::nullopt;
  double elapsed = 0.0;
  for (const auto& s : segments) {
    if (s.device != device) continue;
    const double d = static_cast<double>(s.duration());
    if (elapsed + d >= total / 2.0) return static_cast<double>(s.t_start) + (total / 2.0 - elapsed);
    elapsed += d;
  }
  return std::nullopt;
}

}  // namespace

DeviceKind attribute_gaze(const Pose& head, const ScreenGeometry& screen, double max_gaze_range) {
  const Pose to_screen = screen.pose.inverse();
  const Vec3 origin = to_screen.apply(head.position);
  const Vec3 direction = to_screen.orientation * head.forward();
  if (std::abs(direction.z()) < 1e-12) return DeviceKind::vr;
  const double t = -origin.z() / direction.z();
  if (t < 0.0 || t > max_gaze_range) return DeviceKind::vr;
  const Vec3 hit = origin + t * direction;
  const bool inside = std::abs(hit.x()) <= screen.width_m / 2.0 && std::abs(hit.y()) <= screen.height_m / 2.0;
  return inside ? DeviceKind::pc : DeviceKind::vr;
}

ScreenGeometry ScreenTrack::at(std::int64_t t) const {
  ScreenGeometry screen = geometry;
  if (poses.empty()) return screen;
  auto it = std::upper_bound(poses.begin(), poses.end(), t, [](std::int64_t value, const auto& p) { return value < p.first; });
  screen.pose = it == poses.begin() ? poses.front().second : std::prev(it)->second;
  return screen;
}

ScreenTrack screen_track(const std::vector<PoseSample>& table_samples, const AnalyticsConfig& config) {
  ScreenTrack track{config.screen, {}};
  for (const auto& s : table_samples)
    if (s.kind == PoseKind::table)
      track.poses.emplace_back(s.t, align_simulated_screen(s.pose(), config.calibration_offset));
  std::stable_sort(track.poses.begin(), track.poses.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return track;
}

std::vector<UsageSegment> smooth_attributions(const std::vector<std::pair<std::int64_t, DeviceKind>>& raw,
                                              std::int64_t min_dwell_ms) {
  std::vector<UsageSegment> segments;
  if (raw.size() < 2 || raw.back().first <= raw.front().first) return segments;
  DeviceKind current = raw.front().second;
  std::int64_t segment_start = raw.front().first;
  std::optional<std::int64_t> candidate_since;
  for (const auto& [t, device] : raw) {
    if (device == current) {
      candidate_since.reset();
      continue;
    }
    if (!candidate_since) candidate_since = t;
    if (t - *candidate_since >= min_dwell_ms) {
      if (*candidate_since > segment_start) segments.push_back({current, segment_start, *candidate_since});
      segment_start = *candidate_since;
      current = device;
      candidate_since.reset();
    }
  }
  segments.push_back({current, segment_start, raw.back().first});
  return segments;
}

std::vector<UsageSegment> usage_timeline(const std::vector<PoseSample>& head_samples, const ScreenTrack& screens,
                                         const AnalyticsConfig& config) {
  std::vector<std::pair<std::int64_t, DeviceKind>> raw;
  raw.reserve(head_samples.size());
  for (const auto& s : head_samples)
    raw.emplace_back(s.t, attribute_gaze(s.pose(), screens.at(s.t), config.max_gaze_range));
  std::stable_sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return smooth_attributions(raw, config.min_dwell_ms);
}

std::string_view to_string(TemporalStrategy s) {
  switch (s) {
    case TemporalStrategy::PCDominant: return "PCDominant";
    case TemporalStrategy::VRDominant: return "VRDominant";
    case TemporalStrategy::VRThenPC: return "VRThenPC";
    case TemporalStrategy::FrequentSwitch: return "FrequentSwitch";
  }
  return "FrequentSwitch";
}

std::string_view to_string(SpatialStrategy s) {
  switch (s) {
    case SpatialStrategy::StationaryUserAndPC: return "StationaryUserAndPC";
    case SpatialStrategy::StationaryPC: return "StationaryPC";
    case SpatialStrategy::SelfRotation: return "SelfRotation";
    case SpatialStrategy::Carrying: return "Carrying";
  }
  return "Carrying";
}

TemporalSummary summarize_segments(const std::vector<UsageSegment>& segments) {
  TemporalSummary summary;
  double total = 0.0, pc = 0.0;
  for (const auto& s : segments) {
    total += static_cast<double>(s.duration());
    if (s.device == DeviceKind::pc) pc += static_cast<double>(s.duration());
  }
  summary.pc_fraction = total > 0.0 ? pc / total : 0.0;
  summary.switch_count = segments.empty() ? 0 : static_cast<int>(segments.size()) - 1;
  summary.pc_midpoint = midpoint(segments, DeviceKind::pc);
  summary.vr_midpoint = midpoint(segments, DeviceKind::vr);
  return summary;
}

TemporalStrategy classify_temporal(const TemporalSummary& summary, const AnalyticsConfig& config) {
  if (summary.pc_fraction > config.pc_dominant_fraction) return TemporalStrategy::PCDominant;
  if (summary.pc_fraction < config.vr_dominant_fraction) return TemporalStrategy::VRDominant;
  const bool vr_first = summary.vr_midpoint && summary.pc_midpoint && *summary.vr_midpoint < *summary.pc_midpoint;
  if (summary.switch_count < config.switch_threshold && vr_first) return TemporalStrategy::VRThenPC;
  return TemporalStrategy::FrequentSwitch;
}

TemporalStrategy temporal_strategy(const std::vector<UsageSegment>& segments, const AnalyticsConfig& config) {
  return classify_temporal(summarize_segments(segments), config);
}

SpatialStrategy spatial_strategy(double user_path_m, double table_path_m, const AnalyticsConfig& config) {
  const bool user_moves = user_path_m >= config.user_path_threshold;
  const bool table_moves = table_path_m >= config.table_path_threshold;
  if (user_moves && table_moves) return SpatialStrategy::Carrying;
  if (user_moves) return SpatialStrategy::StationaryPC;
  if (table_moves) return SpatialStrategy::SelfRotation;
  return SpatialStrategy::StationaryUserAndPC;
}

double path_length(const std::vector<PoseSample>& samples, double jitter_floor) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  Vec2 anchor(samples.front().position.x(), samples.front().position.z());
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const Vec2 p(samples[i].position.x(), samples[i].position.z());
    const double step = (p - anchor).norm();
    if (step >= jitter_floor) {
      total += step;
      anchor = p;
    }
  }
  return total;
}

std::map<std::string, std::int64_t> interaction_counts(const std::vector<SessionEvent>& events) {
  auto counts = empty_counts();
  for (const auto& e : events) ++counts[std::string(op_type(e.body))];
  return counts;
}

std::map<std::string, std::int64_t> interaction_counts(const std::vector<Message>& transcript) {
  auto counts = empty_counts();
  std::set<std::int64_t> seen;
  for (const auto& m : transcript) {
    if (m.type != MessageType::OpApplied && m.type != MessageType::SelectionApplied) continue;
    if (!m.seq || !seen.insert(*m.seq).second) continue;
    ++counts[m.payload.at("op").at("type").get<std::string>()];
  }
  return counts;
}

DescriptiveStats descriptive_stats(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("descriptive statistics need at least one value");
  DescriptiveStats stats;
  stats.n = values.size();
  const double n = static_cast<double>(values.size());
  stats.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return stats;
  double ss = 0.0;
  for (const double v : values) ss += (v - stats.mean) * (v - stats.mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t t(n - 1.0);
  stats.ci95_half_width = boost::math::quantile(t, 0.975) * sd / std::sqrt(n);
  return stats;
}

StrategyReport build_report(const std::vector<SessionEvent>& events, const std::vector<PoseSample>& poses,
                            const AnalyticsConfig& config) {
  StrategyReport report;
  report.interaction_counts = interaction_counts(events);

  std::map<DeviceId, std::vector<PoseSample>> heads, tables;
  std::vector<PoseSample> all_tables;
  for (const auto& p : poses) {
    (p.kind == PoseKind::head ? heads : tables)[p.device].push_back(p);
    if (p.kind == PoseKind::table) all_tables.push_back(p);
  }
  const auto by_time = [](const PoseSample& a, const PoseSample& b) { return a.t < b.t; };
  for (auto* group : {&heads, &tables})
    for (auto& [device, samples] : *group) {
      std::stable_sort(samples.begin(), samples.end(), by_time);
      (group == &heads ? report.user_path_m : report.table_path_m) += path_length(samples, config.jitter_floor);
    }

  std::optional<DeviceId> user = config.user_device;
  if (!user) {
    std::size_t most = 0;
    for (const auto& [device, samples] : heads)
      if (samples.size() > most) {
        most = samples.size();
        user = device;
      }
  }
  if (user && heads.count(*user))
    report.segments = usage_timeline(heads.at(*user), screen_track(all_tables, config), config);

  const auto summary = summarize_segments(report.segments);
  report.pc_fraction = summary.pc_fraction;
  report.switch_count = summary.switch_count;
  report.temporal = classify_temporal(summary, config);
  report.spatial = spatial_strategy(report.user_path_m, report.table_path_m, config);

  std::vector<double> pc_seconds, vr_seconds;
  for (const auto& s : report.segments)
    (s.device == DeviceKind::pc ? pc_seconds : vr_seconds).push_back(static_cast<double>(s.duration()) / 1000.0);
  if (!pc_seconds.empty()) report.stats["pcSegmentSeconds"] = descriptive_stats(pc_seconds);
  if (!vr_seconds.empty()) report.stats["vrSegmentSeconds"] = descriptive_stats(vr_seconds);
  return report;
}

std::map<std::string, DescriptiveStats> summarize_reports(const std::vector<StrategyReport>& reports) {
  std::map<std::string, std::vector<double>> metrics;
  for (const auto& r : reports) {
    metrics["pcFraction"].push_back(r.pc_fraction);
    metrics["switchCount"].push_back(r.switch_count);
    metrics["userPathMeters"].push_back(r.user_path_m);
    metrics["tablePathMeters"].push_back(r.table_path_m);
    for (const auto& [op, count] : r.interaction_counts) metrics["count." + op].push_back(static_cast<double>(count));
  }
  std::map<std::string, DescriptiveStats> out;
  for (const auto& [name, values] : metrics) out[name] = descriptive_stats(values);
  return out;
}

Json to_json(const DescriptiveStats& stats) {
  return Json{{"n", stats.n},
              {"mean", stats.mean},
              {"ci95HalfWidth", stats.ci95_half_width ? Json(*stats.ci95_half_width) : Json(nullptr)}};
}

Json to_json(const StrategyReport& report) {
  Json segments = Json::array();
  for (const auto& s : report.segments)
    segments.push_back({{"device", to_string(s.device)}, {"tStart", s.t_start}, {"tEnd", s.t_end}});
  Json stats = Json::object();
  for (const auto& [name, s] : report.stats) stats[name] = to_json(s);
  return Json{{"temporal", to_string(report.temporal)},
              {"spatial", to_string(report.spatial)},
              {"pcFraction", report.pc_fraction},
              {"switchCount", report.switch_count},
              {"userPathMeters", report.user_path_m},
              {"tablePathMeters", report.table_path_m},
              {"interactionCounts", report.interaction_counts},
              {"segments", segments},
              {"stats", stats}};
}

std::string segments_csv(const std::vector<UsageSegment>& segments) {
  std::ostringstream out;
  out << "device,tStart,tEnd,durationMs\n";
  for (const auto& s : segments)
    out << to_string(s.device) << ',' << s.t_start << ',' << s.t_end << ',' << s.duration() << '\n';
  return out.str();
}

std::string counts_csv(const std::map<std::string, std::int64_t>& counts) {
  std::ostringstream out;
  out << "opType,count\n";
  for (const auto& [op, count] : counts) out << op << ',' << count << '\n';
  return out.str();
}

}  // namespace hybridsense
