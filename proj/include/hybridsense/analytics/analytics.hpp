#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybridsense/layout/layout.hpp"
#include "hybridsense/sync/protocol.hpp"

namespace hybridsense {

struct AnalyticsConfig {
  int switch_threshold = 10;
  std::int64_t min_dwell_ms = 2000;
  double jitter_floor = 0.005;     // m
  double max_gaze_range = 10.0;    // m
  double pc_dominant_fraction = 0.75;
  double vr_dominant_fraction = 0.25;
  double user_path_threshold = 290.0;  // m
  double table_path_threshold = 5.5;   // m
  // Simulated screen; its pose is used when the log has no table samples.
  ScreenGeometry screen = ScreenGeometry::from_diagonal(32.0, 2560, 1440, Pose{Vec3(0, 1.2, -0.6), Quat::Identity()});
  // screen = table * calibration offset.
  Pose calibration_offset = Pose{Vec3(0, 0.45, 0), Quat::Identity()};
  // Head samples of this device drive gaze; defaults to the device with the
  // most head samples.
  std::optional<DeviceId> user_device;
};

// pc iff the head's forward ray hits the screen rectangle within range.
DeviceKind attribute_gaze(const Pose& head, const ScreenGeometry& screen, double max_gaze_range = 10.0);

// Screen pose over time, stepping at each table sample.
struct ScreenTrack {
  ScreenGeometry geometry;
  std::vector<std::pair<std::int64_t, Pose>> poses;  // sorted by t

  // Latest pose at or before t (the first one before any sample).
  ScreenGeometry at(std::int64_t t) const;
};

ScreenTrack screen_track(const std::vector<PoseSample>& table_samples, const AnalyticsConfig& config);

struct UsageSegment {
  DeviceKind device = DeviceKind::pc;
  std::int64_t t_start = 0;
  std::int64_t t_end = 0;
  std::int64_t duration() const { return t_end - t_start; }
  bool operator==(const UsageSegment&) const = default;
};

// Gaze per head sample, smoothed: a switch is recognized after min_dwell_ms of
// consistent attribution and takes effect where that run began. Segments cover
// first to last sample exactly.
std::vector<UsageSegment> usage_timeline(const std::vector<PoseSample>& head_samples, const ScreenTrack& screens,
                                         const AnalyticsConfig& config = {});
// Same, from precomputed attributions (t, device), sorted by t.
std::vector<UsageSegment> smooth_attributions(const std::vector<std::pair<std::int64_t, DeviceKind>>& raw,
                                              std::int64_t min_dwell_ms);

enum class TemporalStrategy { PCDominant, VRDominant, VRThenPC, FrequentSwitch };
enum class SpatialStrategy { StationaryUserAndPC, StationaryPC, SelfRotation, Carrying };
std::string_view to_string(TemporalStrategy s);
std::string_view to_string(SpatialStrategy s);

struct TemporalSummary {
  double pc_fraction = 0.0;
  int switch_count = 0;
  // Instant when half of each device's total time has elapsed.
  std::optional<double> pc_midpoint;
  std::optional<double> vr_midpoint;
};

// A switch is a boundary between consecutive usage segments.
TemporalSummary summarize_segments(const std::vector<UsageSegment>& segments);

TemporalStrategy classify_temporal(const TemporalSummary& summary, const AnalyticsConfig& config = {});
TemporalStrategy temporal_strategy(const std::vector<UsageSegment>& segments, const AnalyticsConfig& config = {});
SpatialStrategy spatial_strategy(double user_path_m, double table_path_m, const AnalyticsConfig& config = {});

// Horizontal (x, z) distance, counting a step only once it reaches the jitter
// floor from the last counted position.
double path_length(const std::vector<PoseSample>& samples, double jitter_floor = 0.005);

// Applied events per operation type; every type has a bucket.
std::map<std::string, std::int64_t> interaction_counts(const std::vector<SessionEvent>& events);
// Counts OpApplied/SelectionApplied messages (each seq once); errors are ignored.
std::map<std::string, std::int64_t> interaction_counts(const std::vector<Message>& transcript);

struct DescriptiveStats {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> ci95_half_width;  // absent when n = 1
};

// Mean and t-distribution 95% CI half-width. Throws std::invalid_argument on empty input.
DescriptiveStats descriptive_stats(const std::vector<double>& values);

struct StrategyReport {
  TemporalStrategy temporal = TemporalStrategy::VRDominant;
  SpatialStrategy spatial = SpatialStrategy::StationaryUserAndPC;
  double pc_fraction = 0.0;
  int switch_count = 0;
  double user_path_m = 0.0;
  double table_path_m = 0.0;
  std::map<std::string, std::int64_t> interaction_counts;
  std::vector<UsageSegment> segments;
  std::map<std::string, DescriptiveStats> stats;
};

StrategyReport build_report(const std::vector<SessionEvent>& events, const std::vector<PoseSample>& poses,
                            const AnalyticsConfig& config = {});

// Across sessions: pcFraction, switchCount, paths and each interaction count.
std::map<std::string, DescriptiveStats> summarize_reports(const std::vector<StrategyReport>& reports);

Json to_json(const DescriptiveStats& stats);
Json to_json(const StrategyReport& report);
std::string segments_csv(const std::vector<UsageSegment>& segments);
std::string counts_csv(const std::map<std::string, std::int64_t>& counts);

}  // namespace hybridsense
