#include "hybridsense/interaction/handheld.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hybridsense {

std::optional<std::size_t> DocumentLayout::offset(int row, int column) const {
  if (row < 0 || column < 0 || column >= columns || row >= static_cast<int>(lines.size())) return std::nullopt;
  const auto index = static_cast<std::size_t>(row) * static_cast<std::size_t>(columns) + static_cast<std::size_t>(column);
  if (index >= text.size()) return std::nullopt;
  return index;
}

DocumentLayout layout_document(const DocumentId& document, const std::string& text, int columns, double cell_width,
                               double cell_height, const Pose& pose) {
  if (columns <= 0 || !(cell_width > 0.0) || !(cell_height > 0.0))
    throw std::invalid_argument("layout needs positive columns and cell size");
  DocumentLayout layout{document, text, {}, columns, cell_width, cell_height, pose};
  for (std::size_t i = 0; i < text.size(); i += static_cast<std::size_t>(columns))
    layout.lines.push_back(text.substr(i, static_cast<std::size_t>(columns)));
  if (layout.lines.empty()) layout.lines.emplace_back();
  return layout;
}

std::optional<DocumentLayout> pick_up_document(const HandFrame& frame, std::span<const DocumentPanel> panels,
                                               const InteractionConfig& config, const HandheldOptions& options) {
  if (frame.left.posture != Posture::pinch) return std::nullopt;
  const DocumentPanel* best = nullptr;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const auto& panel : panels) {
    const Vec3 local = panel.pose.inverse().apply(frame.left.fingertip);
    const double dx = std::max(0.0, std::abs(local.x()) - panel.width / 2.0);
    const double dy = std::max(0.0, std::abs(local.y()) - panel.height / 2.0);
    const double d = Vec3(dx, dy, local.z()).norm();
    if (d <= config.pinch_radius && d < best_distance) {
      best = &panel;
      best_distance = d;
    }
  }
  if (!best) return std::nullopt;
  const double cell = options.width / options.columns;
  const Pose palm{frame.left.palm, frame.left.orientation};
  return layout_document(best->document, best->text, options.columns, cell, cell * 1.6, palm.compose(options.offset));
}

bool HandheldSlot::pick(const HandFrame& frame, std::span<const DocumentPanel> panels,
                        const InteractionConfig& config, const HandheldOptions& options) {
  auto picked = pick_up_document(frame, panels, config, options);
  if (!picked) return false;
  layout = std::move(picked);
  return true;
}

std::optional<std::pair<int, int>> touched_cell(const Vec3& fingertip, const DocumentLayout& layout,
                                                double touch_depth) {
  const Vec3 local = layout.pose.inverse().apply(fingertip);
  if (std::abs(local.z()) > touch_depth) return std::nullopt;
  const double x = local.x() + layout.width() / 2.0;
  const double y = layout.height() / 2.0 - local.y();
  if (x < 0.0 || y < 0.0 || x >= layout.width() || y >= layout.height()) return std::nullopt;
  return std::pair{static_cast<int>(std::floor(y / layout.cell_height)),
                   static_cast<int>(std::floor(x / layout.cell_width))};
}

TextSelection text_select(std::span<const Vec3> fingertip_path, const DocumentLayout& layout,
                          const InteractionConfig& config) {
  std::optional<std::size_t> first, last;
  for (const auto& point : fingertip_path) {
    const auto cell = touched_cell(point, layout, config.touch_depth);
    if (!cell) continue;
    const auto index = layout.offset(cell->first, cell->second);
    if (!index) continue;
    first = first ? std::min(*first, *index) : *index;
    last = last ? std::max(*last, *index) : *index;
  }
  if (!first) throw NoContact();
  return TextSelection{*first, *last + 1, layout.text.substr(*first, *last + 1 - *first)};
}

std::optional<std::string> ray_select(const Ray& ray, std::span<const RayTarget> targets,
                                      const InteractionConfig& config) {
  const double norm = ray.direction.norm();
  if (norm == 0.0) return std::nullopt;
  const Vec3 d = ray.direction / norm;
  std::optional<std::string> best;
  double best_t = std::numeric_limits<double>::infinity();
  for (const auto& target : targets) {
    const Vec3 oc = ray.origin - target.center;
    const double b = oc.dot(d);
    const double c = oc.squaredNorm() - target.radius * target.radius;
    double t;
    if (c <= 0.0) {
      t = 0.0;
    } else {
      const double disc = b * b - c;
      if (disc < 0.0) continue;
      t = -b - std::sqrt(disc);
      if (t < 0.0) continue;
    }
    if (t <= config.max_ray_range && t < best_t) {
      best_t = t;
      best = target.id;
    }
  }
  return best;
}

}  // namespace hybridsense
