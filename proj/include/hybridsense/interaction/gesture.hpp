#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <variant>
#include <vector>

#include "hybridsense/geometry.hpp"
#include "hybridsense/graph/ops.hpp"
#include "hybridsense/interaction/config.hpp"

namespace hybridsense {

enum class Posture { flat, fist, pinch };
std::string_view to_string(Posture posture);
Posture posture_from_string(std::string_view text);

struct HandSample {
  Vec3 palm = Vec3::Zero();
  Quat orientation = Quat::Identity();
  Posture posture = Posture::flat;
  Vec3 fingertip = Vec3::Zero();
  Vec3 ray_origin = Vec3::Zero();
  Vec3 ray_direction = Vec3(0, 0, -1);
};

enum class Hand { left = 0, right = 1 };

struct HandFrame {
  std::int64_t t = 0;  // ms
  HandSample left;
  HandSample right;

  const HandSample& hand(Hand h) const { return h == Hand::left ? left : right; }
};

Json to_json(const HandFrame& frame);
HandFrame hand_frame_from_json(const Json& j);

struct Idle {};
struct GrabbingNode {
  NodeId node;
  Vec3 grab_offset;      // node center in the palm frame
  Vec3 origin;           // node position before the grab
  Vec3 current;          // node position last emitted
  std::int64_t since = 0;
};
struct DraggingLinkSource {
  NodeId node;
};
struct PullingLink {
  LinkId link;
  Vec3 anchor;
};
using HandMode = std::variant<Idle, GrabbingNode, DraggingLinkSource, PullingLink>;

struct TwoHandZoom {
  double start_distance = 0.0;
  double start_scale = 1.0;
};

struct HandTrack {
  HandMode mode = Idle{};
  std::optional<Posture> previous_posture;
  // Palm samples (t, position), newest last, at most three.
  std::deque<std::pair<std::int64_t, Vec3>> history;
  Vec3 velocity = Vec3::Zero();
};

struct GestureState {
  std::array<HandTrack, 2> hands;
  std::optional<TwoHandZoom> zoom;
  double zoom_scale = 1.0;
  std::optional<std::int64_t> last_t;

  HandTrack& hand(Hand h) { return hands[static_cast<std::size_t>(h)]; }
  const HandTrack& hand(Hand h) const { return hands[static_cast<std::size_t>(h)]; }
};

struct GestureOutput {
  std::vector<Op> ops;
  // Local view scale change; never replicated.
  std::optional<double> zoom_scale;
};

// Smoothed velocity from the last three palm samples: two thirds of the newest
// finite difference plus one third of the previous one.
Vec3 smoothed_velocity(const std::deque<std::pair<std::int64_t, Vec3>>& history);

// Advances the gesture machine by one frame. `graph` is the caller's current
// view of the shared graph. Throws std::invalid_argument if t does not increase.
GestureOutput gesture_step(const HandFrame& frame, GestureState& state, const Graph& graph,
                           const InteractionConfig& config = {});

// Runs a whole stream from a fresh state.
std::vector<Op> run_gestures(const std::vector<HandFrame>& frames, const Graph& graph,
                             const InteractionConfig& config = {});

}  // namespace hybridsense
