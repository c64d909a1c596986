#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "hybridsense/analytics/analytics.hpp"
#include "hybridsense/sync/event_log.hpp"
#include "hybridsense/sync/session.hpp"
#include "support/gaze_oracle.hpp"
#include "support/recording_sink.hpp"

using namespace hybridsense;
using testing_support::Recorder;
using testing_support::sampled_gaze_hits;

namespace {

Quat looking_along(const Vec3& direction) {
  return Quat::FromTwoVectors(Vec3(0, 0, -1), direction.normalized());
}

Pose head_looking_at(const Vec3& head, const Vec3& target) { return Pose{head, looking_along(target - head)}; }

PoseSample sample(std::int64_t t, const Vec3& p, const Quat& q = Quat::Identity(), PoseKind kind = PoseKind::head,
                  DeviceId device = "vr-1") {
  return PoseSample{std::move(device), kind, t, p, q};
}

std::vector<std::pair<std::int64_t, DeviceKind>> blocks(const std::vector<std::pair<DeviceKind, int>>& spec,
                                                         int step_ms = 100) {
  std::vector<std::pair<std::int64_t, DeviceKind>> raw;
  std::int64_t t = 0;
  for (const auto& [device, duration] : spec)
    for (int elapsed = 0; elapsed < duration; elapsed += step_ms, t += step_ms) raw.emplace_back(t, device);
  raw.emplace_back(t, spec.back().first);
  return raw;
}

std::int64_t total_duration(const std::vector<UsageSegment>& segments) {
  std::int64_t sum = 0;
  for (const auto& s : segments) sum += s.duration();
  return sum;
}

}  // namespace

TEST(Gaze, FacingScreenCenterIsPc) {
  const auto screen = AnalyticsConfig{}.screen;
  const Vec3 center = screen.pose.position;
  EXPECT_EQ(attribute_gaze(head_looking_at(center + Vec3(0, 0, 1), center), screen), DeviceKind::pc);
}

TEST(Gaze, FacingAwayIsVr) {
  const auto screen = AnalyticsConfig{}.screen;
  const Vec3 head = screen.pose.position + Vec3(0, 0, 1);
  EXPECT_EQ(attribute_gaze(Pose{head, looking_along(Vec3(0, 0, 1))}, screen), DeviceKind::vr);
}

TEST(Gaze, ParallelToScreenIsVr) {
  const auto screen = AnalyticsConfig{}.screen;
  const Vec3 head = screen.pose.position + Vec3(-1, 0, 0);
  EXPECT_EQ(attribute_gaze(Pose{head, looking_along(Vec3(1, 0, 0))}, screen), DeviceKind::vr);
}

TEST(Gaze, BeyondRangeIsVr) {
  const auto screen = AnalyticsConfig{}.screen;
  const Vec3 center = screen.pose.position;
  const auto far = head_looking_at(center + Vec3(0, 0, 12), center);
  EXPECT_EQ(attribute_gaze(far, screen, 10.0), DeviceKind::vr);
  EXPECT_EQ(attribute_gaze(far, screen, 12.5), DeviceKind::pc);
}

TEST(Gaze, JustOutsideEdgeIsVr) {
  const auto screen = AnalyticsConfig{}.screen;
  const Vec3 center = screen.pose.position;
  const Vec3 head = center + Vec3(0, 0, 1);
  const Vec3 inside = center + Vec3(screen.width_m / 2 - 1e-4, 0, 0);
  const Vec3 outside = center + Vec3(screen.width_m / 2 + 1e-4, 0, 0);
  EXPECT_EQ(attribute_gaze(head_looking_at(head, inside), screen), DeviceKind::pc);
  EXPECT_EQ(attribute_gaze(head_looking_at(head, outside), screen), DeviceKind::vr);
}

TEST(Gaze, MatchesPointSamplingOracleOnObliquePoses) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int agree = 0, hits = 0;
  constexpr int kPoses = 1000;
  for (int i = 0; i < kPoses; ++i) {
    const Quat tilt = Quat(Eigen::AngleAxisd(0.6 * unit(rng), Vec3::UnitY())) *
                      Quat(Eigen::AngleAxisd(0.3 * unit(rng), Vec3::UnitX()));
    const auto screen = ScreenGeometry::from_diagonal(32, 2560, 1440, Pose{Vec3(unit(rng), 1.2, -0.6), tilt});
    const Vec3 head = screen.pose.apply(Vec3(1.5 * unit(rng), 0.5 * unit(rng), 0.5 + 2.0 * std::abs(unit(rng))));
    const Vec3 target =
        screen.pose.apply(Vec3(0.6 * screen.width_m * unit(rng), 0.6 * screen.height_m * unit(rng), 0.0));
    Pose pose = head_looking_at(head, target);
    if (i % 10 == 0) pose.orientation = Quat(Eigen::AngleAxisd(M_PI * unit(rng), Vec3::UnitY())) * pose.orientation;
    const bool oracle = sampled_gaze_hits(pose, screen, 10.0);
    hits += oracle;
    agree += (attribute_gaze(pose, screen) == DeviceKind::pc) == oracle;
  }
  EXPECT_GT(hits, kPoses / 4);
  EXPECT_LT(hits, 3 * kPoses / 4);
  EXPECT_GE(agree, 999);
}

TEST(ScreenTrackTest, FollowsTableWithCalibrationOffset) {
  AnalyticsConfig config;
  const auto track = screen_track({sample(1000, Vec3(1, 0.75, -0.6), Quat::Identity(), PoseKind::table, "pc-1"),
                                   sample(0, Vec3(0, 0.75, -0.6), Quat::Identity(), PoseKind::table, "pc-1")},
                                  config);
  ASSERT_EQ(track.poses.size(), 2u);
  EXPECT_TRUE(track.at(-5).pose.position.isApprox(Vec3(0, 1.2, -0.6)));
  EXPECT_TRUE(track.at(999).pose.position.isApprox(Vec3(0, 1.2, -0.6)));
  EXPECT_TRUE(track.at(1000).pose.position.isApprox(Vec3(1, 1.2, -0.6)));
}

TEST(ScreenTrackTest, WithoutTableSamplesUsesConfiguredScreen) {
  AnalyticsConfig config;
  EXPECT_TRUE(screen_track({}, config).at(0).pose.position.isApprox(config.screen.pose.position));
}

TEST(UsageTimeline, ConstantPcGazeIsOneSegment) {
  AnalyticsConfig config;
  const Vec3 center = config.screen.pose.position;
  std::vector<PoseSample> samples;
  for (std::int64_t t = 0; t <= 60000; t += 100) {
    const auto pose = head_looking_at(center + Vec3(0, 0, 1), center);
    samples.push_back(sample(t, pose.position, pose.orientation));
  }
  const auto segments = usage_timeline(samples, screen_track({}, config), config);
  ASSERT_EQ(segments.size(), 1u);
  EXPECT_EQ(segments[0], (UsageSegment{DeviceKind::pc, 0, 60000}));
}

TEST(UsageTimeline, ShortBlipIsAbsorbed) {
  auto raw = blocks({{DeviceKind::pc, 30000}, {DeviceKind::vr, 100}, {DeviceKind::pc, 30000}});
  const auto segments = smooth_attributions(raw, 2000);
  ASSERT_EQ(segments.size(), 1u);
  EXPECT_EQ(segments[0].device, DeviceKind::pc);
  EXPECT_EQ(segments[0].duration(), raw.back().first - raw.front().first);
}

TEST(UsageTimeline, AlternatingBlocksGiveOneSegmentPerBlock) {
  std::vector<std::pair<DeviceKind, int>> spec;
  for (int i = 0; i < 8; ++i) spec.emplace_back(i % 2 ? DeviceKind::vr : DeviceKind::pc, 5000);
  const auto raw = blocks(spec);
  const auto segments = smooth_attributions(raw, 2000);
  ASSERT_EQ(segments.size(), spec.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    EXPECT_EQ(segments[i].device, spec[i].first);
    EXPECT_EQ(segments[i].t_start, static_cast<std::int64_t>(i) * 5000);
  }
  EXPECT_EQ(total_duration(segments), raw.back().first - raw.front().first);
}

TEST(UsageTimeline, SegmentsPartitionSessionUnderRandomFlicker) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution flip(0.02);
  std::vector<std::pair<std::int64_t, DeviceKind>> raw;
  DeviceKind d = DeviceKind::pc;
  for (std::int64_t t = 500; t <= 200000; t += 100) {
    if (flip(rng)) d = d == DeviceKind::pc ? DeviceKind::vr : DeviceKind::pc;
    raw.emplace_back(t, d);
  }
  const auto segments = smooth_attributions(raw, 2000);
  ASSERT_FALSE(segments.empty());
  EXPECT_EQ(segments.front().t_start, 500);
  EXPECT_EQ(segments.back().t_end, 200000);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    EXPECT_GT(segments[i].t_end, segments[i].t_start);
    if (i > 0) {
      EXPECT_EQ(segments[i].t_start, segments[i - 1].t_end);
      EXPECT_NE(segments[i].device, segments[i - 1].device);
    }
  }
}

TEST(UsageTimeline, FewerThanTwoSamplesGiveNoSegments) {
  EXPECT_TRUE(smooth_attributions({}, 2000).empty());
  EXPECT_TRUE(smooth_attributions({{5, DeviceKind::pc}}, 2000).empty());
}

TEST(TemporalStrategyTest, PaperExamples) {
  EXPECT_EQ(classify_temporal({0.80, 2, 1.0, 0.0}), TemporalStrategy::PCDominant);
  EXPECT_EQ(classify_temporal({0.10, 2, 1.0, 0.0}), TemporalStrategy::VRDominant);
}

TEST(TemporalStrategyTest, VrBlockFirstWithFewSwitchesIsVrThenPc) {
  const std::vector<UsageSegment> segments{{DeviceKind::vr, 0, 10000},
                                           {DeviceKind::pc, 10000, 20000},
                                           {DeviceKind::vr, 20000, 30000},
                                           {DeviceKind::pc, 30000, 40000}};
  const auto summary = summarize_segments(segments);
  EXPECT_DOUBLE_EQ(summary.pc_fraction, 0.5);
  EXPECT_EQ(summary.switch_count, 3);
  EXPECT_DOUBLE_EQ(*summary.vr_midpoint, 10000);
  EXPECT_DOUBLE_EQ(*summary.pc_midpoint, 20000);
  EXPECT_EQ(temporal_strategy(segments), TemporalStrategy::VRThenPC);
}

TEST(TemporalStrategyTest, PcBlockFirstIsFrequentSwitch) {
  const std::vector<UsageSegment> segments{{DeviceKind::pc, 0, 10000}, {DeviceKind::vr, 10000, 20000}};
  EXPECT_EQ(temporal_strategy(segments), TemporalStrategy::FrequentSwitch);
}

TEST(TemporalStrategyTest, ManySwitchesIsFrequentSwitch) {
  std::vector<UsageSegment> segments;
  for (int i = 0; i < 12; ++i) segments.push_back({i % 2 ? DeviceKind::pc : DeviceKind::vr, i * 1000, (i + 1) * 1000});
  EXPECT_EQ(summarize_segments(segments).switch_count, 11);
  EXPECT_EQ(temporal_strategy(segments), TemporalStrategy::FrequentSwitch);
}

TEST(TemporalStrategyTest, SwitchThresholdIsExclusive) {
  AnalyticsConfig config;
  EXPECT_EQ(classify_temporal({0.5, 9, 2.0, 1.0}, config), TemporalStrategy::VRThenPC);
  EXPECT_EQ(classify_temporal({0.5, 10, 2.0, 1.0}, config), TemporalStrategy::FrequentSwitch);
}

TEST(TemporalStrategyTest, EmptySessionIsVrDominant) {
  EXPECT_EQ(temporal_strategy({}), TemporalStrategy::VRDominant);
}

class TemporalBoundary : public ::testing::TestWithParam<std::tuple<double, TemporalStrategy>> {};

TEST_P(TemporalBoundary, AssignsCategory) {
  const auto [fraction, expected] = GetParam();
  EXPECT_EQ(classify_temporal({fraction, 20, 1.0, 0.0}), expected);
}

INSTANTIATE_TEST_SUITE_P(Anchors, TemporalBoundary,
                         ::testing::Values(std::tuple{0.75 + 1e-9, TemporalStrategy::PCDominant},
                                           std::tuple{0.75, TemporalStrategy::FrequentSwitch},
                                           std::tuple{0.75 - 1e-9, TemporalStrategy::FrequentSwitch},
                                           std::tuple{0.25 + 1e-9, TemporalStrategy::FrequentSwitch},
                                           std::tuple{0.25, TemporalStrategy::FrequentSwitch},
                                           std::tuple{0.25 - 1e-9, TemporalStrategy::VRDominant}));

class SpatialBoundary : public ::testing::TestWithParam<std::tuple<double, double, SpatialStrategy>> {};

TEST_P(SpatialBoundary, AssignsCategory) {
  const auto [user, table, expected] = GetParam();
  EXPECT_EQ(spatial_strategy(user, table), expected);
}

INSTANTIATE_TEST_SUITE_P(
    Anchors, SpatialBoundary,
    ::testing::Values(std::tuple{300.0, 6.0, SpatialStrategy::Carrying},
                      std::tuple{0.0, 0.0, SpatialStrategy::StationaryUserAndPC},
                      std::tuple{290.0, 5.5, SpatialStrategy::Carrying},
                      std::tuple{290.0 - 1e-9, 5.5, SpatialStrategy::SelfRotation},
                      std::tuple{290.0, 5.5 - 1e-9, SpatialStrategy::StationaryPC},
                      std::tuple{290.0 - 1e-9, 5.5 - 1e-9, SpatialStrategy::StationaryUserAndPC},
                      std::tuple{290.0 + 1e-9, 5.5 + 1e-9, SpatialStrategy::Carrying}));

TEST(PathLength, TwoSamplesOneMeterApart) {
  EXPECT_DOUBLE_EQ(path_length({sample(0, Vec3(0, 1.7, 0)), sample(100, Vec3(1, 1.7, 0))}, 0.005), 1.0);
}

TEST(PathLength, SquareLoop) {
  std::vector<PoseSample> s;
  for (const auto& p : {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 1), Vec3(0, 0, 1), Vec3(0, 0, 0)})
    s.push_back(sample(static_cast<std::int64_t>(s.size()) * 100, p));
  EXPECT_NEAR(path_length(s, 0.005), 4.0, 1e-12);
}

TEST(PathLength, NoiseBelowFloorIsZero) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI), radius(0, 0.002);
  std::vector<PoseSample> s;
  for (int i = 0; i < 1000; ++i) {
    const double a = angle(rng), r = radius(rng);
    s.push_back(sample(i * 100, Vec3(2 + r * std::cos(a), 1.7, -1 + r * std::sin(a))));
  }
  EXPECT_EQ(path_length(s, 0.005), 0.0);
}

TEST(PathLength, SlowDriftStillCounts) {
  std::vector<PoseSample> s;
  for (int i = 0; i <= 1000; ++i) s.push_back(sample(i * 100, Vec3(i * 0.001, 0, 0)));
  // Only the tail short of the floor goes uncounted.
  EXPECT_NEAR(path_length(s, 0.005), 1.0, 0.005);
}

TEST(PathLength, InvariantUnderVerticalShiftAndTimeScale) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> step(0, 0.05);
  std::vector<PoseSample> s;
  Vec3 p = Vec3::Zero();
  for (int i = 0; i < 500; ++i) {
    p += Vec3(step(rng), step(rng), step(rng));
    s.push_back(sample(i * 100, p));
  }
  auto shifted = s, rescaled = s;
  for (auto& x : shifted) x.position.y() += 3.0;
  for (auto& x : rescaled) x.t *= 7;
  const double base = path_length(s, 0.005);
  EXPECT_GT(base, 0.0);
  EXPECT_DOUBLE_EQ(path_length(shifted, 0.005), base);
  EXPECT_DOUBLE_EQ(path_length(rescaled, 0.005), base);
}

TEST(PathLength, EmptyIsZero) { EXPECT_EQ(path_length({}, 0.005), 0.0); }

TEST(InteractionCounts, CountsPerTypeWithZeroBuckets) {
  std::vector<SessionEvent> events;
  std::int64_t seq = 0;
  for (int i = 0; i < 5; ++i) events.push_back({++seq, 0, "pc-1", DeviceKind::pc, AddNode{"n", "x", {}, ""}});
  for (int i = 0; i < 3; ++i) events.push_back({++seq, 0, "pc-1", DeviceKind::pc, AddLink{"l", "a", "b", ""}});
  const auto counts = interaction_counts(events);
  EXPECT_EQ(counts.at("addNode"), 5);
  EXPECT_EQ(counts.at("addLink"), 3);
  for (const char* op : {"removeNode", "removeLink", "updateNode", "updateLink", "mergeNodes"})
    EXPECT_EQ(counts.at(op), 0) << op;
}

TEST(InteractionCounts, LiveTranscriptMatchesReplayedLog) {
  const auto dir = std::filesystem::temp_directory_path() / "hybridsense_analytics_counts";
  std::filesystem::create_directories(dir);
  const auto log = dir / "events.jsonl";
  std::filesystem::remove(log);

  Recorder rec;
  {
    Session session(SessionConfig{.event_log_path = log});
    session.join("pc-1", DeviceKind::pc, rec.sink());
    std::mt19937_64 rng(21);
    std::vector<NodeId> nodes;
    for (int i = 0; i < 60; ++i) {
      const auto pick = [&] { return nodes.empty() ? NodeId("n0") : nodes[rng() % nodes.size()]; };
      Op op;
      switch (rng() % 6) {
        case 0: case 1: op = AddNode{"", "node" + std::to_string(i), Vec3::Zero(), ""}; break;
        case 2: op = AddLink{"", pick(), pick(), "rel"}; break;
        case 3: op = UpdateNode{pick(), "renamed"}; break;
        case 4: op = RemoveNode{pick()}; break;
        default: op = MergeNodes{pick(), pick()}; break;
      }
      const auto result = session.submit("pc-1", op);
      if (result.seq && std::holds_alternative<AddNode>(op)) nodes.push_back("n" + std::to_string(*result.seq));
    }
    session.submit("pc-1", RemoveNode{"missing"});
    session.flush();
  }
  const auto transcript = rec.messages();
  ASSERT_TRUE(std::any_of(transcript.begin(), transcript.end(),
                          [](const Message& m) { return m.type == MessageType::Error; }));
  const auto replayed = read_event_log(log);
  EXPECT_EQ(interaction_counts(transcript), interaction_counts(replayed));

  std::int64_t total = 0;
  for (const auto& [op, count] : interaction_counts(replayed)) total += count;
  EXPECT_EQ(total, static_cast<std::int64_t>(replayed.size()));
}

TEST(DescriptiveStatsTest, ConstantValuesHaveZeroWidth) {
  const auto s = descriptive_stats({2, 2, 2});
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  ASSERT_TRUE(s.ci95_half_width);
  EXPECT_DOUBLE_EQ(*s.ci95_half_width, 0.0);
}

TEST(DescriptiveStatsTest, MatchesTTable) {
  // Two-sided 95% critical values from a printed t table.
  constexpr double t_2 = 4.302652729911275, t_9 = 2.262157162740992;
  const auto three = descriptive_stats({1, 2, 3});
  EXPECT_DOUBLE_EQ(three.mean, 2.0);
  EXPECT_NEAR(*three.ci95_half_width, t_2 / std::sqrt(3.0), 1e-9);
  EXPECT_NEAR(*three.ci95_half_width, 2.484, 1e-3);

  std::vector<double> ten;
  for (int i = 1; i <= 10; ++i) ten.push_back(i);
  const double sd = std::sqrt(82.5 / 9.0);
  EXPECT_NEAR(*descriptive_stats(ten).ci95_half_width, t_9 * sd / std::sqrt(10.0), 1e-9);
}

TEST(DescriptiveStatsTest, SingleValueHasNoInterval) {
  const auto s = descriptive_stats({4.5});
  EXPECT_EQ(s.n, 1u);
  EXPECT_DOUBLE_EQ(s.mean, 4.5);
  EXPECT_FALSE(s.ci95_half_width);
  EXPECT_TRUE(to_json(s).at("ci95HalfWidth").is_null());
}

TEST(DescriptiveStatsTest, EmptyThrows) { EXPECT_THROW(descriptive_stats({}), std::invalid_argument); }

namespace {

// Table carried 3 m out and back while the user paces in front of it,
// looking at the screen and away in alternating 20 s blocks.
std::vector<PoseSample> carrying_session(const AnalyticsConfig& config) {
  std::vector<PoseSample> poses;
  constexpr std::int64_t kDuration = 400000;
  for (std::int64_t t = 0; t <= kDuration; t += 100) {
    const double s = static_cast<double>(t) / 1000.0;
    const double table_x = s <= 200 ? 3.0 * s / 200 : 3.0 * (400 - s) / 200;
    const Vec3 table(table_x, 0.75, -0.6);
    poses.push_back(sample(t, table, Quat::Identity(), PoseKind::table, "pc-1"));
    const double phase = std::fmod(s, 4.0);
    const double pace = phase < 2 ? phase - 1 : 3 - phase;
    const Vec3 head(table_x + pace, 1.2, 0.9);
    const Vec3 screen_center = align_simulated_screen(Pose{table, Quat::Identity()}, config.calibration_offset).position;
    const bool looking = static_cast<std::int64_t>(s / 20) % 2 == 0;
    const Pose pose = looking ? head_looking_at(head, screen_center) : Pose{head, looking_along(Vec3(0, 0, 1))};
    poses.push_back(sample(t, pose.position, pose.orientation));
  }
  return poses;
}

}  // namespace

TEST(Report, CarryingAndFrequentSwitch) {
  AnalyticsConfig config;
  const auto report = build_report({}, carrying_session(config), config);
  EXPECT_EQ(report.spatial, SpatialStrategy::Carrying);
  EXPECT_EQ(report.temporal, TemporalStrategy::FrequentSwitch);
  EXPECT_NEAR(report.table_path_m, 6.0, 1e-6);
  EXPECT_NEAR(report.user_path_m, 400.0, 1.0);
  EXPECT_EQ(report.switch_count, 19);
  EXPECT_NEAR(report.pc_fraction, 0.5, 1e-3);
  EXPECT_EQ(report.segments.size(), 20u);
  EXPECT_EQ(report.stats.at("pcSegmentSeconds").n, 10u);
}

TEST(Report, EmptyPoseLogIsStationary) {
  const auto report = build_report({}, {});
  EXPECT_EQ(report.user_path_m, 0.0);
  EXPECT_EQ(report.table_path_m, 0.0);
  EXPECT_EQ(report.spatial, SpatialStrategy::StationaryUserAndPC);
  EXPECT_TRUE(report.segments.empty());
}

TEST(Report, ReproducibleFromNumericFields) {
  AnalyticsConfig config;
  const auto report = build_report({}, carrying_session(config), config);
  const auto j = to_json(report);
  const auto summary = summarize_segments(report.segments);
  EXPECT_EQ(j.at("temporal"), to_string(classify_temporal(summary, config)));
  EXPECT_EQ(j.at("spatial"),
            to_string(spatial_strategy(j.at("userPathMeters"), j.at("tablePathMeters"), config)));
  EXPECT_EQ(j.at("switchCount"), 19);
}

TEST(Report, UserDeviceOverride) {
  AnalyticsConfig config;
  auto poses = carrying_session(config);
  for (std::int64_t t = 0; t <= 10000; t += 100)
    poses.push_back(sample(t, Vec3(0, 1.7, 0), looking_along(Vec3(0, 0, 1)), PoseKind::head, "observer"));
  config.user_device = "observer";
  const auto report = build_report({}, poses, config);
  ASSERT_EQ(report.segments.size(), 1u);
  EXPECT_EQ(report.segments[0].device, DeviceKind::vr);
}

TEST(Report, SameInputSameJson) {
  AnalyticsConfig config;
  const auto poses = carrying_session(config);
  auto shuffled = poses;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(1));
  EXPECT_EQ(to_json(build_report({}, poses, config)).dump(), to_json(build_report({}, shuffled, config)).dump());
}

TEST(Report, SummariesAcrossSessions) {
  StrategyReport a, b;
  a.pc_fraction = 0.2;
  b.pc_fraction = 0.4;
  a.interaction_counts = {{"addNode", 3}};
  b.interaction_counts = {{"addNode", 5}};
  const auto stats = summarize_reports({a, b});
  EXPECT_DOUBLE_EQ(stats.at("pcFraction").mean, 0.3);
  EXPECT_DOUBLE_EQ(stats.at("count.addNode").mean, 4.0);
  EXPECT_EQ(stats.at("userPathMeters").n, 2u);
}

TEST(Csv, SegmentsAndCounts) {
  EXPECT_EQ(segments_csv({{DeviceKind::pc, 0, 1500}}), "device,tStart,tEnd,durationMs\npc,0,1500,1500\n");
  EXPECT_EQ(counts_csv({{"addNode", 2}}), "opType,count\naddNode,2\n");
}
