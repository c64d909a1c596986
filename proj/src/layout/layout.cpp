#include "hybridsense/layout/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace hybridsense {
namespace {

constexpr double kAxisEps = 1e-12;

double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

template <class V>
V canonical_sign(V axis) {
  for (int i = 0; i < axis.size(); ++i) {
    if (axis[i] > kAxisEps) return axis;
    if (axis[i] < -kAxisEps) return -axis;
  }
  return axis;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

void LayoutParams::validate() const {
  if (iteration_count < 0) throw std::invalid_argument("iterationCount must be >= 0");
  if (!(cooling_factor > 0.0 && cooling_factor <= 1.0)) throw std::invalid_argument("coolingFactor must be in (0,1]");
  if (!(ideal_edge_length > 0.0)) throw std::invalid_argument("idealEdgeLength must be positive");
  if (!(repulsion_constant >= 0.0)) throw std::invalid_argument("repulsionConstant must be non-negative");
  if (!(initial_temperature >= 0.0)) throw std::invalid_argument("initialTemperature must be non-negative");
}

std::vector<Vec2> project_to_plane(std::span<const Vec3> positions) {
  std::vector<Vec2> out;
  if (positions.empty()) return out;
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : positions) centroid += p;
  centroid /= static_cast<double>(positions.size());

  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  for (const auto& p : positions) {
    const Vec3 d = p - centroid;
    covariance += d * d.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(covariance);
  const Vec3 eigenvalues = solver.eigenvalues();  // ascending

  Vec3 first(1, 0, 0);
  Vec3 second(0, 1, 0);
  const double scale = std::max(1.0, eigenvalues[2]);
  if (eigenvalues[1] > 1e-12 * scale) {
    first = canonical_sign(Vec3(solver.eigenvectors().col(2)));
    second = canonical_sign(Vec3(solver.eigenvectors().col(1)));
  }
  out.reserve(positions.size());
  for (const auto& p : positions) {
    const Vec3 d = p - centroid;
    out.emplace_back(d.dot(first), d.dot(second));
  }
  return out;
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double o1 = cross2(b - a, c - a);
  const double o2 = cross2(b - a, d - a);
  const double o3 = cross2(d - c, a - c);
  const double o4 = cross2(d - c, b - c);
  return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

double clutter_metric(std::span<const Vec2> positions, std::span<const Edge> edges, double min_separation) {
  double clutter = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i)
    for (std::size_t j = i + 1; j < positions.size(); ++j)
      if ((positions[i] - positions[j]).norm() < min_separation) clutter += 1.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (std::size_t f = e + 1; f < edges.size(); ++f) {
      const auto [a, b] = edges[e];
      const auto [c, d] = edges[f];
      if (a == c || a == d || b == c || b == d) continue;
      if (segments_cross(positions[a], positions[b], positions[c], positions[d])) clutter += 1.0;
    }
  }
  return clutter;
}

std::vector<Vec2> force_refine(std::span<const Vec2> positions, std::span<const Edge> edges,
                               const LayoutParams& params) {
  params.validate();
  for (const auto& p : positions)
    if (!p.allFinite()) throw std::invalid_argument("force_refine needs finite positions");
  for (const auto& [a, b] : edges)
    if (a >= positions.size() || b >= positions.size()) throw std::out_of_range("edge endpoint out of range");

  std::vector<Vec2> current(positions.begin(), positions.end());
  std::vector<Vec2> best = current;
  double best_clutter = clutter_metric(best, edges);

  const std::size_t n = current.size();
  const double k = params.ideal_edge_length;
  std::mt19937_64 rng(params.random_seed);
  const auto jitter_direction = [&] {
    const double angle = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi;
    return Vec2(std::cos(angle), std::sin(angle));
  };

  double temperature = params.initial_temperature;
  std::vector<Vec2> displacement(n);
  for (int iteration = 0; iteration < params.iteration_count; ++iteration) {
    std::fill(displacement.begin(), displacement.end(), Vec2::Zero());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Vec2 delta = current[i] - current[j];
        double distance = delta.norm();
        if (distance < 1e-12) {
          delta = jitter_direction() * (1e-6 * k);
          distance = delta.norm();
        }
        const Vec2 push = delta / distance * (params.repulsion_constant * k * k / distance);
        displacement[i] += push;
        displacement[j] -= push;
      }
    }
    for (const auto& [a, b] : edges) {
      if (a == b) continue;
      const Vec2 delta = current[a] - current[b];
      const double distance = delta.norm();
      if (distance < 1e-12) continue;
      const Vec2 pull = delta / distance * (distance * distance / k);
      displacement[a] -= pull;
      displacement[b] += pull;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double length = displacement[i].norm();
      if (length > 0.0) current[i] += displacement[i] / length * std::min(length, temperature);
    }
    temperature *= params.cooling_factor;

    const double clutter = clutter_metric(current, edges);
    if (clutter <= best_clutter) {
      best_clutter = clutter;
      best = current;
    }
  }
  return best;
}

std::vector<Pose> semicircle_placement(std::size_t count, const Pose& center, const SemicircleOptions& options) {
  if (count == 0) throw std::invalid_argument("semicircle_placement needs at least one document");
  std::vector<Pose> poses;
  poses.reserve(count);
  const double step = count == 1 ? 0.0 : options.arc_span_degrees / static_cast<double>(count - 1);
  const double start = count == 1 ? 0.0 : options.arc_span_degrees / 2.0;
  Vec3 eye = center.position;
  eye.y() = options.eye_height;
  for (std::size_t i = 0; i < count; ++i) {
    // Positive yaw turns the forward (-z) direction toward -x, the viewer's left.
    const double yaw = (start - step * static_cast<double>(i)) * std::numbers::pi / 180.0;
    const Quat turn(Eigen::AngleAxisd(yaw, Vec3::UnitY()));
    Pose pose;
    pose.position = center.position + center.orientation * (turn * Vec3(0, 0, -options.radius));
    pose.position.y() = options.eye_height;
    pose.orientation = billboard_orientation(pose.position, eye);
    poses.push_back(pose);
  }
  return poses;
}

Quat billboard_orientation(const Vec3& object, const Vec3& viewer, const Quat& previous) {
  const Vec3 to_viewer = viewer - object;
  const double distance = to_viewer.norm();
  if (distance < 1e-12) return previous;
  const Vec3 forward = to_viewer / distance;
  const Vec3 side = Vec3::UnitY().cross(forward);
  if (side.norm() < 1e-9) return previous;
  Eigen::Matrix3d basis;
  basis.col(0) = side.normalized();
  basis.col(2) = forward;
  basis.col(1) = forward.cross(basis.col(0));
  return Quat(basis).normalized();
}

std::optional<Rect2> bounds_of(std::span<const Vec2> positions) {
  if (positions.empty()) return std::nullopt;
  Rect2 rect{positions.front(), positions.front()};
  for (const auto& p : positions) {
    rect.min = rect.min.cwiseMin(p);
    rect.max = rect.max.cwiseMax(p);
  }
  return rect;
}

ViewportRect minimap_viewport(const std::optional<Rect2>& graph_bounds, const Vec2& pan, double zoom,
                              double canvas_aspect) {
  if (!(zoom > 0.0) || !(canvas_aspect > 0.0)) throw std::invalid_argument("zoom and aspect must be positive");
  const Rect2 bounds = graph_bounds.value_or(Rect2{Vec2(-0.5, -0.5), Vec2(0.5, 0.5)});
  Vec2 half = (bounds.max - bounds.min) / 2.0;
  for (int axis = 0; axis < 2; ++axis)
    if (!(half[axis] > 0.0)) half[axis] = 0.5;
  if (half.x() / half.y() < canvas_aspect) {
    half.x() = half.y() * canvas_aspect;
  } else {
    half.y() = half.x() / canvas_aspect;
  }
  ViewportRect rect;
  rect.center = (bounds.min + bounds.max) / 2.0 + pan;
  rect.half_extent = half / zoom;
  return rect;
}

ScreenGeometry ScreenGeometry::from_diagonal(double diagonal_inches, int resolution_w, int resolution_h,
                                             const Pose& pose) {
  if (!(diagonal_inches > 0.0) || resolution_w <= 0 || resolution_h <= 0)
    throw std::invalid_argument("screen needs a positive diagonal and resolution");
  constexpr double kMetersPerInch = 0.0254;
  const double w = resolution_w;
  const double h = resolution_h;
  const double pixel_diagonal = std::hypot(w, h);
  ScreenGeometry screen;
  screen.diagonal_inches = diagonal_inches;
  screen.resolution_w = resolution_w;
  screen.resolution_h = resolution_h;
  screen.width_m = diagonal_inches * kMetersPerInch * w / pixel_diagonal;
  screen.height_m = diagonal_inches * kMetersPerInch * h / pixel_diagonal;
  screen.pose = pose;
  return screen;
}

double visual_angle_per_pixel(const ScreenGeometry& screen, double eye_distance_m) {
  if (!(eye_distance_m > 0.0)) throw std::invalid_argument("eye distance must be positive");
  const double pixel_width = screen.width_m / screen.resolution_w;
  return degrees(2.0 * std::atan(pixel_width / (2.0 * eye_distance_m)));
}

double mean_visual_angle_per_pixel(const ScreenGeometry& screen, double eye_distance_m) {
  if (!(eye_distance_m > 0.0)) throw std::invalid_argument("eye distance must be positive");
  return degrees(2.0 * std::atan(screen.width_m / (2.0 * eye_distance_m))) / screen.resolution_w;
}

Pose align_simulated_screen(const Pose& tracker, const Pose& calibration_offset) {
  return tracker.compose(calibration_offset);
}

Pose calibrate_offset(const Pose& tracker, const Pose& desired_screen) {
  return tracker.inverse().compose(desired_screen);
}

}  // namespace hybridsense
