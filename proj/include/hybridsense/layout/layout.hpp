#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hybridsense/geometry.hpp"

namespace hybridsense {

// Canvas units are meters-equivalent, so VR and 2D distances compare directly.
inline constexpr double kNodeRenderRadius = 0.025;
inline constexpr double kMinNodeSeparation = 2.0 * kNodeRenderRadius;

using Edge = std::pair<std::size_t, std::size_t>;

struct LayoutParams {
  double ideal_edge_length = 0.25;
  double repulsion_constant = 1.0;
  int iteration_count = 200;
  double initial_temperature = 0.1;
  double cooling_factor = 0.95;
  std::uint64_t random_seed = 0;

  // Throws std::invalid_argument when the parameters are out of range.
  void validate() const;
};

// Orthogonal projection onto the least-squares plane through the centroid.
// Axes follow descending variance; each axis is signed so that its dot with +x
// is non-negative (ties broken by +y, then +z). Colinear or coincident input
// falls back to the global x-y plane.
std::vector<Vec2> project_to_plane(std::span<const Vec3> positions);

// Spring embedder with pairwise repulsion k^2/d, edge attraction d^2/k and a
// cooling displacement cap. Returns the iterate with the lowest clutter_metric,
// preferring later iterates on ties, so the result never scores worse than
// the input. Exact coincidences are split by jitter drawn from random_seed.
std::vector<Vec2> force_refine(std::span<const Vec2> positions, std::span<const Edge> edges,
                               const LayoutParams& params);

// Node pairs closer than min_separation plus properly crossing edge pairs.
double clutter_metric(std::span<const Vec2> positions, std::span<const Edge> edges,
                      double min_separation = kMinNodeSeparation);

// True when the open segments cross at a single interior point.
bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

struct SemicircleOptions {
  double radius = 2.0;
  double arc_span_degrees = 180.0;
  double eye_height = 1.5;
};

// Evenly spaced poses along an arc in front of `center`, listed left to right as
// seen from the center, each facing back toward it.
std::vector<Pose> semicircle_placement(std::size_t count, const Pose& center, const SemicircleOptions& options = {});

// Roll-free rotation whose +z axis points from object to viewer. Returns
// `previous` when the viewer is straight above or below the object.
Quat billboard_orientation(const Vec3& object, const Vec3& viewer, const Quat& previous = Quat::Identity());

struct Rect2 {
  Vec2 min = Vec2::Zero();
  Vec2 max = Vec2::Zero();
};

std::optional<Rect2> bounds_of(std::span<const Vec2> positions);

struct ViewportRect {
  Vec2 center = Vec2::Zero();
  Vec2 half_extent = Vec2(0.5, 0.5);
};

// Graph-space rectangle visible at (pan, zoom). Without bounds the unit square
// around the origin is used; zero-size extents widen to 0.5.
ViewportRect minimap_viewport(const std::optional<Rect2>& graph_bounds, const Vec2& pan, double zoom,
                              double canvas_aspect);

struct ScreenGeometry {
  double diagonal_inches = 32.0;
  int resolution_w = 2560;
  int resolution_h = 1440;
  double width_m = 0.0;
  double height_m = 0.0;
  Pose pose;

  static ScreenGeometry from_diagonal(double diagonal_inches, int resolution_w, int resolution_h,
                                      const Pose& pose = Pose::identity());
};

// Angle subtended by one pixel at the center of the screen, in degrees.
double visual_angle_per_pixel(const ScreenGeometry& screen, double eye_distance_m);
// Horizontal field of view of the whole screen divided by its pixel columns.
double mean_visual_angle_per_pixel(const ScreenGeometry& screen, double eye_distance_m);

// The simulated screen rides on the tracked desk: screen = tracker * offset.
Pose align_simulated_screen(const Pose& tracker, const Pose& calibration_offset);
// Offset that makes align_simulated_screen(tracker, offset) == desired.
Pose calibrate_offset(const Pose& tracker, const Pose& desired_screen);

}  // namespace hybridsense
