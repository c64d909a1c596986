#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hybridsense/layout/layout.hpp"

using namespace hybridsense;

namespace {

Quat random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Quat q(normal(rng), normal(rng), normal(rng), normal(rng));
  return q.normalized();
}

Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

// Parametric segment intersection, independent of the orientation test.
bool oracle_cross(const Vec2& p, const Vec2& p2, const Vec2& q, const Vec2& q2) {
  const Vec2 r = p2 - p;
  const Vec2 s = q2 - q;
  const double denom = r.x() * s.y() - r.y() * s.x();
  if (std::abs(denom) < 1e-15) return false;
  const Vec2 qp = q - p;
  const double t = (qp.x() * s.y() - qp.y() * s.x()) / denom;
  const double u = (qp.x() * r.y() - qp.y() * r.x()) / denom;
  return t > 1e-12 && t < 1 - 1e-12 && u > 1e-12 && u < 1 - 1e-12;
}

double yaw_degrees(const Vec3& offset) { return std::atan2(-offset.x(), -offset.z()) * 180.0 / std::numbers::pi; }

}  // namespace

TEST(ProjectToPlane, SinglePointMapsToOrigin) {
  const std::vector<Vec3> one{Vec3(3, 4, 5)};
  const auto out = project_to_plane(one);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], Vec2::Zero());
}

TEST(ProjectToPlane, CoplanarPointsKeepDistances) {
  std::mt19937_64 rng(1);
  const Quat tilt = random_rotation(rng);
  std::vector<Vec3> points;
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 20; ++i) points.push_back(tilt * Vec3(u(rng) * 2, u(rng), 0) + Vec3(1, 2, 3));
  const auto out = project_to_plane(points);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      EXPECT_NEAR((out[i] - out[j]).norm(), (points[i] - points[j]).norm(), 1e-9);
}

TEST(ProjectToPlane, ContractionOnRandomClouds) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec3> points;
    for (int i = 0; i < 15; ++i) points.push_back(random_vec(rng, 2.0));
    const auto out = project_to_plane(points);
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j)
        ASSERT_LE((out[i] - out[j]).norm(), (points[i] - points[j]).norm() + 1e-12);
  }
}

TEST(ProjectToPlane, AxisSignAndDegenerateFallback) {
  // Dominant spread along -x: first axis must still point toward +x.
  const std::vector<Vec3> points{Vec3(-2, 0, 0), Vec3(2, 0.1, 0), Vec3(0, 0.5, 0.01), Vec3(0, -0.5, -0.01)};
  const auto out = project_to_plane(points);
  EXPECT_LT(out[0].x(), 0);
  EXPECT_GT(out[1].x(), 0);
  // Colinear along z: the x-y fallback collapses them.
  const std::vector<Vec3> colinear{Vec3(1, 1, 0), Vec3(1, 1, 1), Vec3(1, 1, 2)};
  for (const auto& p : project_to_plane(colinear)) EXPECT_NEAR(p.norm(), 0.0, 1e-12);
  // Colinear along x: x-y fallback keeps the spread.
  const std::vector<Vec3> along_x{Vec3(0, 0, 0), Vec3(1, 0, 0)};
  const auto line = project_to_plane(along_x);
  EXPECT_NEAR((line[0] - line[1]).norm(), 1.0, 1e-12);
}

TEST(Clutter, WellSeparatedTreeIsZero) {
  const std::vector<Vec2> pos{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {1, 1}};
  const std::vector<Edge> edges{{0, 1}, {0, 2}, {0, 3}, {1, 4}};
  EXPECT_EQ(clutter_metric(pos, edges), 0.0);
}

TEST(Clutter, ConvexK4HasOneCrossing) {
  const std::vector<Vec2> pos{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) edges.emplace_back(i, j);
  int oracle = 0;
  for (std::size_t e = 0; e < edges.size(); ++e)
    for (std::size_t f = e + 1; f < edges.size(); ++f)
      oracle += oracle_cross(pos[edges[e].first], pos[edges[e].second], pos[edges[f].first], pos[edges[f].second]);
  EXPECT_EQ(oracle, 1);
  EXPECT_EQ(clutter_metric(pos, edges), 1.0);
}

TEST(Clutter, CoincidentNodesCount) {
  const std::vector<Vec2> pos{{0.3, 0.3}, {0.3, 0.3}};
  EXPECT_GE(clutter_metric(pos, {}), 1.0);
}

TEST(Clutter, CrossingTestMatchesParametricOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 20000; ++i) {
    const Vec2 a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng)), d(u(rng), u(rng));
    ASSERT_EQ(segments_cross(a, b, c, d), oracle_cross(a, b, c, d));
  }
}

TEST(ForceRefine, ZeroIterationsIsIdentity) {
  const std::vector<Vec2> pos{{0, 0}, {0.1, 0.3}, {2, 2}};
  const std::vector<Edge> edges{{0, 1}};
  LayoutParams params;
  params.iteration_count = 0;
  EXPECT_EQ(force_refine(pos, edges, params), pos);
}

TEST(ForceRefine, SeparatesCoincidentConnectedNodes) {
  const std::vector<Vec2> pos{{0.5, 0.5}, {0.5, 0.5}};
  const std::vector<Edge> edges{{0, 1}};
  const auto out = force_refine(pos, edges, LayoutParams{});
  EXPECT_GT((out[0] - out[1]).norm(), 0.0);
}

TEST(ForceRefine, NeverIncreasesClutterAndIsReproducible) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 29;
    std::vector<Vec2> pos;
    for (std::size_t i = 0; i < n; ++i) pos.emplace_back(u(rng), u(rng));
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n + n / 2; ++i) edges.emplace_back(rng() % n, rng() % n);
    LayoutParams params;
    params.random_seed = trial;
    const auto a = force_refine(pos, edges, params);
    const auto b = force_refine(pos, edges, params);
    EXPECT_LE(clutter_metric(a, edges), clutter_metric(pos, edges));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].x(), b[i].x());
      EXPECT_EQ(a[i].y(), b[i].y());
    }
  }
}

TEST(ForceRefine, RejectsBadParams) {
  LayoutParams params;
  params.cooling_factor = 0.0;
  EXPECT_THROW(force_refine(std::vector<Vec2>{}, std::vector<Edge>{}, params), std::invalid_argument);
  params = {};
  params.iteration_count = -1;
  EXPECT_THROW(params.validate(), std::invalid_argument);
  const std::vector<Vec2> nan{{std::nan(""), 0}};
  EXPECT_THROW(force_refine(nan, std::vector<Edge>{}, LayoutParams{}), std::invalid_argument);
}

TEST(Semicircle, SingleDocumentSitsAtArcMidpoint) {
  const auto poses = semicircle_placement(1, Pose::identity());
  ASSERT_EQ(poses.size(), 1u);
  EXPECT_NEAR(poses[0].position.x(), 0.0, 1e-12);
  EXPECT_NEAR(poses[0].position.z(), -2.0, 1e-12);
  EXPECT_NEAR(poses[0].position.y(), 1.5, 1e-12);
}

TEST(Semicircle, EvenGapsAndRadius) {
  const auto poses = semicircle_placement(3, Pose::identity(), {2.0, 180.0, 1.5});
  ASSERT_EQ(poses.size(), 3u);
  EXPECT_NEAR(yaw_degrees(poses[0].position), 90.0, 1e-9);
  EXPECT_NEAR(yaw_degrees(poses[1].position), 0.0, 1e-9);
  EXPECT_NEAR(yaw_degrees(poses[2].position), -90.0, 1e-9);
  EXPECT_LT(poses[0].position.x(), poses[2].position.x());  // left to right
  for (const auto& pose : poses) {
    const Vec3 flat(pose.position.x(), 0, pose.position.z());
    EXPECT_NEAR(flat.norm(), 2.0, 1e-12);
    // Each panel's +z faces the center.
    const Vec3 facing = pose.orientation * Vec3::UnitZ();
    EXPECT_NEAR(facing.dot(-flat.normalized()), 1.0, 1e-12);
  }
}

TEST(Billboard, FacesViewer) {
  const Quat ahead = billboard_orientation(Vec3(0, 1, -2), Vec3(0, 1, 0));
  EXPECT_NEAR(std::abs(ahead.w()), 1.0, 1e-12);
  const Quat behind = billboard_orientation(Vec3(0, 1, 2), Vec3(0, 1, 0));
  EXPECT_NEAR(behind.angularDistance(Quat(Eigen::AngleAxisd(std::numbers::pi, Vec3::UnitY()))), 0.0, 1e-9);
  const Quat previous(Eigen::AngleAxisd(0.3, Vec3::UnitY()));
  const Quat above = billboard_orientation(Vec3(0, 0, 0), Vec3(0, 3, 0), previous);
  EXPECT_TRUE(above.isApprox(previous));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const Vec3 obj = random_vec(rng, 3), viewer = random_vec(rng, 3);
    const Quat q = billboard_orientation(obj, viewer);
    EXPECT_NEAR(q.norm(), 1.0, 1e-9);
    EXPECT_NEAR((q * Vec3::UnitZ()).dot((viewer - obj).normalized()), 1.0, 1e-9);
    EXPECT_NEAR((q * Vec3::UnitX()).y(), 0.0, 1e-9);  // roll-free
  }
}

TEST(Minimap, ZoomPanAndDefault) {
  const Rect2 bounds{Vec2(0, 0), Vec2(4, 2)};
  const auto base = minimap_viewport(bounds, Vec2::Zero(), 1.0, 2.0);
  EXPECT_TRUE(base.center.isApprox(Vec2(2, 1)));
  EXPECT_TRUE(base.half_extent.isApprox(Vec2(2, 1)));
  const auto zoomed = minimap_viewport(bounds, Vec2::Zero(), 2.0, 2.0);
  EXPECT_TRUE(zoomed.half_extent.isApprox(base.half_extent / 2.0));
  const auto panned = minimap_viewport(bounds, Vec2(0.5, -1), 1.0, 2.0);
  EXPECT_TRUE(panned.center.isApprox(base.center + Vec2(0.5, -1)));
  const auto tall = minimap_viewport(bounds, Vec2::Zero(), 1.0, 0.5);
  EXPECT_NEAR(tall.half_extent.x() / tall.half_extent.y(), 0.5, 1e-12);
  EXPECT_GE(tall.half_extent.x(), 2.0);
  const auto empty = minimap_viewport(std::nullopt, Vec2::Zero(), 1.0, 1.0);
  EXPECT_TRUE(empty.center.isApprox(Vec2::Zero()));
  EXPECT_TRUE(empty.half_extent.isApprox(Vec2(0.5, 0.5)));
}

TEST(VisualAngle, MonitorFigure) {
  const auto screen = ScreenGeometry::from_diagonal(32, 2560, 1440);
  EXPECT_NEAR(screen.width_m / screen.height_m, 2560.0 / 1440.0, 1e-12);
  EXPECT_NEAR(std::hypot(screen.width_m, screen.height_m) / 0.0254, 32.0, 1e-9);
  // Closed form evaluated independently: 0.7084166 m / 2560 px at 1 m.
  EXPECT_NEAR(visual_angle_per_pixel(screen, 1.0), 0.01585518783661845, 1e-12);
  EXPECT_NEAR(mean_visual_angle_per_pixel(screen, 1.0), 0.015237943704870263, 1e-12);
  EXPECT_NEAR(visual_angle_per_pixel(screen, 2.0), visual_angle_per_pixel(screen, 1.0) / 2.0, 1e-4);
}

TEST(VisualAngle, PilotScreenMatchesTrigOracle) {
  const auto screen = ScreenGeometry::from_diagonal(85, 3840, 2160);
  // Angle between the rays to both edges of the central pixel.
  const double pixel = 85 * 0.0254 * 3840 / std::hypot(3840.0, 2160.0) / 3840;
  const Vec3 left(-pixel / 2, 0, 1), right(pixel / 2, 0, 1);
  const double oracle = std::acos(left.normalized().dot(right.normalized())) * 180.0 / std::numbers::pi;
  EXPECT_NEAR(visual_angle_per_pixel(screen, 1.0), oracle, 1e-9);
}

TEST(ScreenAlignment, IdentityAndTranslation) {
  std::mt19937_64 rng(6);
  Pose tracker{random_vec(rng, 2), random_rotation(rng)};
  const Pose same = align_simulated_screen(tracker, Pose::identity());
  EXPECT_TRUE(same.position.isApprox(tracker.position));
  EXPECT_NEAR(same.orientation.angularDistance(tracker.orientation), 0.0, 1e-12);

  const Pose offset{Vec3(0, 0.4, 0.1), random_rotation(rng)};
  const Pose before = align_simulated_screen(tracker, offset);
  Pose moved = tracker;
  moved.position += Vec3(1, 0, 0);
  const Pose after = align_simulated_screen(moved, offset);
  EXPECT_TRUE((after.position - before.position).isApprox(Vec3(1, 0, 0)));

  const Pose equal = calibrate_offset(tracker, tracker);
  EXPECT_NEAR(equal.position.norm(), 0.0, 1e-12);
  EXPECT_NEAR(equal.orientation.angularDistance(Quat::Identity()), 0.0, 1e-7);

  const Pose shifted{tracker.position + Vec3(0, 0.5, 0), tracker.orientation};
  const Pose pure = calibrate_offset(tracker, shifted);
  EXPECT_NEAR(pure.orientation.angularDistance(Quat::Identity()), 0.0, 1e-7);
  EXPECT_NEAR(pure.position.norm(), 0.5, 1e-12);
}

TEST(ScreenAlignment, CalibrateRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Pose tracker{random_vec(rng, 3), random_rotation(rng)};
    const Pose desired{random_vec(rng, 3), random_rotation(rng)};
    const Pose offset = calibrate_offset(tracker, desired);
    EXPECT_NEAR(offset.orientation.norm(), 1.0, 1e-9);
    const Pose screen = align_simulated_screen(tracker, offset);
    ASSERT_LT((screen.position - desired.position).cwiseAbs().maxCoeff(), 1e-9);
    ASSERT_LT((screen.orientation.coeffs() - desired.orientation.coeffs()).cwiseAbs().maxCoeff(), 1e-9);
  }
}
