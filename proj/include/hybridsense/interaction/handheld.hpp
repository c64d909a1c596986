#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridsense/interaction/gesture.hpp"

namespace hybridsense {

// A document drawn as a fixed glyph grid on a flat panel. The panel lies in the
// local x-y plane of `pose`, facing +z; row 0 is at the top (+y), column 0 at
// the left (-x). The body is hard-wrapped at `columns` characters, so every
// character owns exactly one cell.
struct DocumentLayout {
  DocumentId document;
  std::string text;
  std::vector<std::string> lines;
  int columns = 0;
  double cell_width = 0.0;
  double cell_height = 0.0;
  Pose pose;

  double width() const { return columns * cell_width; }
  double height() const { return static_cast<double>(lines.size()) * cell_height; }
  // Character offset of a cell, or nullopt past the end of the text.
  std::optional<std::size_t> offset(int row, int column) const;
};

DocumentLayout layout_document(const DocumentId& document, const std::string& text, int columns, double cell_width,
                               double cell_height, const Pose& pose);

// A document panel in the room, for picking up.
struct DocumentPanel {
  DocumentId document;
  std::string text;
  Pose pose;
  double width = 0.6;
  double height = 0.8;
};

struct HandheldOptions {
  double width = 0.2;  // m, handheld copy
  int columns = 40;
  // Panel pose relative to the left palm.
  Pose offset{Vec3(0.0, 0.0, 0.0), Quat::Identity()};
};

// Left-hand pinch on a document panel (fingertip within pinch_radius of the
// panel rectangle) returns a scaled copy attached to the left palm. Anything
// else returns nullopt.
std::optional<DocumentLayout> pick_up_document(const HandFrame& frame, std::span<const DocumentPanel> panels,
                                               const InteractionConfig& config = {},
                                               const HandheldOptions& options = {});

// Single handheld slot: a successful pick replaces the held document.
struct HandheldSlot {
  std::optional<DocumentLayout> layout;
  bool pick(const HandFrame& frame, std::span<const DocumentPanel> panels, const InteractionConfig& config = {},
            const HandheldOptions& options = {});
};

class NoContact : public std::runtime_error {
 public:
  NoContact() : std::runtime_error("NoContact: fingertip path never touched the panel") {}
};

struct TextSelection {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive
  std::string text;
};

// Cell under a fingertip, if it touches (within touch_depth of the plane and
// inside the grid).
std::optional<std::pair<int, int>> touched_cell(const Vec3& fingertip, const DocumentLayout& layout,
                                                double touch_depth);

// From the first to the last touched glyph in reading order. Throws NoContact.
TextSelection text_select(std::span<const Vec3> fingertip_path, const DocumentLayout& layout,
                          const InteractionConfig& config = {});

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3(0, 0, -1);
};

struct RayTarget {
  std::string id;
  Vec3 center = Vec3::Zero();
  double radius = 0.025;
};

// Nearest sphere hit along the ray within max_ray_range. A ray starting inside
// a sphere hits it at distance 0.
std::optional<std::string> ray_select(const Ray& ray, std::span<const RayTarget> targets,
                                      const InteractionConfig& config = {});

}  // namespace hybridsense
