#include "hybridsense/interaction/gesture.hpp"

#include <limits>
#include <stdexcept>

namespace hybridsense {
namespace {

constexpr std::array kHands{Hand::left, Hand::right};

Hand other(Hand h) { return h == Hand::left ? Hand::right : Hand::left; }

Json hand_json(const HandSample& h) {
  return Json{{"palm", to_json(h.palm)},
              {"orientation", to_json(h.orientation)},
              {"posture", to_string(h.posture)},
              {"fingertip", to_json(h.fingertip)},
              {"rayOrigin", to_json(h.ray_origin)},
              {"rayDirection", to_json(h.ray_direction)}};
}

HandSample hand_from_json(const Json& j) {
  HandSample h;
  for (const auto& [key, value] : j.items()) {
    if (key == "palm") h.palm = vec3_from_json(value);
    else if (key == "orientation") h.orientation = quat_from_json(value);
    else if (key == "posture") h.posture = posture_from_string(value.get<std::string>());
    else if (key == "fingertip") h.fingertip = vec3_from_json(value);
    else if (key == "rayOrigin") h.ray_origin = vec3_from_json(value);
    else if (key == "rayDirection") h.ray_direction = vec3_from_json(value);
    else throw std::invalid_argument("unknown hand field: " + key);
  }
  return h;
}

const GrabbingNode* grabbed(const HandTrack& track) { return std::get_if<GrabbingNode>(&track.mode); }

// Nearest node within radius of point, skipping `exclude`. Ties go to the
// smaller id.
std::optional<NodeId> nearest_node(const Graph& graph, const Vec3& point, double radius, bool allow_anchors,
                                   const std::vector<NodeId>& exclude) {
  std::optional<NodeId> best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const auto& [id, node] : graph.nodes()) {
    if (!allow_anchors && node.kind == NodeKind::documentAnchor) continue;
    if (std::find(exclude.begin(), exclude.end(), id) != exclude.end()) continue;
    const double d = (node.position - point).norm();
    if (d <= radius && d < best_distance) {
      best = id;
      best_distance = d;
    }
  }
  return best;
}

std::pair<std::optional<LinkId>, double> nearest_link_midpoint(const Graph& graph, const Vec3& point) {
  std::optional<LinkId> best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const auto& [id, link] : graph.links()) {
    const auto s = graph.nodes().find(link.source_id);
    const auto t = graph.nodes().find(link.target_id);
    if (s == graph.nodes().end() || t == graph.nodes().end()) continue;
    const double d = ((s->second.position + t->second.position) / 2.0 - point).norm();
    if (d < best_distance) {
      best = id;
      best_distance = d;
    }
  }
  return {best, best_distance};
}

}  // namespace

std::string_view to_string(Posture posture) {
  switch (posture) {
    case Posture::flat: return "flat";
    case Posture::fist: return "fist";
    case Posture::pinch: return "pinch";
  }
  return "flat";
}

Posture posture_from_string(std::string_view text) {
  if (text == "flat") return Posture::flat;
  if (text == "fist") return Posture::fist;
  if (text == "pinch") return Posture::pinch;
  throw std::invalid_argument("unknown posture: " + std::string(text));
}

Json to_json(const HandFrame& frame) {
  return Json{{"t", frame.t}, {"left", hand_json(frame.left)}, {"right", hand_json(frame.right)}};
}

HandFrame hand_frame_from_json(const Json& j) {
  HandFrame frame;
  for (const auto& [key, value] : j.items()) {
    if (key == "t") frame.t = value.get<std::int64_t>();
    else if (key == "left") frame.left = hand_from_json(value);
    else if (key == "right") frame.right = hand_from_json(value);
    else throw std::invalid_argument("unknown frame field: " + key);
  }
  return frame;
}

Vec3 smoothed_velocity(const std::deque<std::pair<std::int64_t, Vec3>>& history) {
  const auto diff = [&](std::size_t newer) {
    const auto& [t1, p1] = history[newer];
    const auto& [t0, p0] = history[newer - 1];
    const double dt = static_cast<double>(t1 - t0) / 1000.0;
    return dt > 0.0 ? Vec3((p1 - p0) / dt) : Vec3(Vec3::Zero());
  };
  if (history.size() < 2) return Vec3::Zero();
  const std::size_t last = history.size() - 1;
  if (history.size() == 2) return diff(last);
  return (2.0 / 3.0) * diff(last) + (1.0 / 3.0) * diff(last - 1);
}

GestureOutput gesture_step(const HandFrame& frame, GestureState& state, const Graph& graph,
                           const InteractionConfig& config) {
  if (state.last_t && frame.t <= *state.last_t)
    throw std::invalid_argument("hand frames must have strictly increasing t");
  state.last_t = frame.t;
  GestureOutput out;

  for (const Hand h : kHands) {
    auto& track = state.hand(h);
    track.history.emplace_back(frame.t, frame.hand(h).palm);
    while (track.history.size() > 3) track.history.pop_front();
    track.velocity = smoothed_velocity(track.history);
  }

  const auto previous = [&](Hand h) { return state.hand(h).previous_posture; };
  const auto now = [&](Hand h) { return frame.hand(h).posture; };
  const auto became = [&](Hand h, Posture from, Posture to) {
    return previous(h) == from && now(h) == to;
  };
  const auto left_fist = [&](Hand h) { return previous(h) == Posture::fist && now(h) != Posture::fist; };

  // Releases first, so a node let go this frame can be a link or merge target.
  const bool left_release = left_fist(Hand::left) && grabbed(state.hand(Hand::left));
  const bool right_release = left_fist(Hand::right) && grabbed(state.hand(Hand::right));
  if (left_release && right_release) {
    const auto& a = *grabbed(state.hand(Hand::left));
    const auto& b = *grabbed(state.hand(Hand::right));
    if ((a.current - b.current).norm() <= config.merge_radius) {
      const bool left_first = a.since < b.since || (a.since == b.since && a.node < b.node);
      out.ops.push_back(MergeNodes{left_first ? a.node : b.node, left_first ? b.node : a.node});
      state.hand(Hand::left).mode = Idle{};
      state.hand(Hand::right).mode = Idle{};
    }
  }
  for (const Hand h : kHands) {
    auto& track = state.hand(h);
    const auto* g = grabbed(track);
    if (!g || !left_fist(h)) continue;
    const GrabbingNode grab = *g;
    track.mode = Idle{};
    if (track.velocity.norm() > config.throw_speed) {
      out.ops.push_back(RemoveNode{grab.node});
      continue;
    }
    std::vector<NodeId> exclude{grab.node};
    if (const auto* held = grabbed(state.hand(other(h)))) exclude.push_back(held->node);
    if (const auto target = nearest_node(graph, grab.current, config.link_radius, true, exclude)) {
      out.ops.push_back(AddLink{"", grab.node, *target, ""});
      out.ops.push_back(MoveNode{grab.node, grab.origin});
      continue;
    }
    out.ops.push_back(MoveNode{grab.node, grab.current});
  }

  for (const Hand h : kHands) {
    auto& track = state.hand(h);
    const auto& sample = frame.hand(h);

    // Pinch release.
    if (previous(h) == Posture::pinch && now(h) != Posture::pinch) {
      if (const auto* drag = std::get_if<DraggingLinkSource>(&track.mode)) {
        if (const auto target = nearest_node(graph, sample.fingertip, config.link_radius, true, {drag->node}))
          out.ops.push_back(AddLink{"", drag->node, *target, ""});
      }
      track.mode = Idle{};
    }

    // Grab.
    if (became(h, Posture::flat, Posture::fist) && std::holds_alternative<Idle>(track.mode)) {
      std::vector<NodeId> exclude;
      if (const auto* held = grabbed(state.hand(other(h)))) exclude.push_back(held->node);
      if (const auto node = nearest_node(graph, sample.palm, config.grab_radius, false, exclude)) {
        const Vec3 position = graph.nodes().at(*node).position;
        track.mode = GrabbingNode{*node, sample.orientation.conjugate() * (position - sample.palm), position,
                                  position, frame.t};
      }
    }

    // Pinch start: nearest of node and link midpoint.
    if (previous(h) && previous(h) != Posture::pinch && now(h) == Posture::pinch &&
        std::holds_alternative<Idle>(track.mode)) {
      const auto node = nearest_node(graph, sample.fingertip, config.grab_radius, true, {});
      const double node_distance =
          node ? (graph.nodes().at(*node).position - sample.fingertip).norm() : std::numeric_limits<double>::infinity();
      const auto [link, link_distance] = nearest_link_midpoint(graph, sample.fingertip);
      if (link && link_distance <= config.pinch_radius && link_distance < node_distance)
        track.mode = PullingLink{*link, sample.fingertip};
      else if (node)
        track.mode = DraggingLinkSource{*node};
    }

    // Held node follows the palm.
    if (auto* g = std::get_if<GrabbingNode>(&track.mode); g && previous(h) == Posture::fist && now(h) == Posture::fist) {
      const Vec3 position = sample.palm + sample.orientation * g->grab_offset;
      if (position != g->current) {
        g->current = position;
        out.ops.push_back(MoveNode{g->node, position});
      }
    }

    if (const auto* pull = std::get_if<PullingLink>(&track.mode); pull && now(h) == Posture::pinch) {
      if ((sample.fingertip - pull->anchor).norm() > config.pull_distance) {
        out.ops.push_back(RemoveLink{pull->link});
        track.mode = Idle{};
      }
    }
  }

  // Two-hand zoom: both fists, nothing held.
  const bool both_fists = now(Hand::left) == Posture::fist && now(Hand::right) == Posture::fist;
  const bool nothing_held = !grabbed(state.hand(Hand::left)) && !grabbed(state.hand(Hand::right));
  const double distance = (frame.left.palm - frame.right.palm).norm();
  if (both_fists && nothing_held) {
    const bool started = became(Hand::left, Posture::flat, Posture::fist) ||
                         became(Hand::right, Posture::flat, Posture::fist);
    if (!state.zoom && started && distance > 0.0) state.zoom = TwoHandZoom{distance, state.zoom_scale};
    if (state.zoom) {
      const double scale = state.zoom->start_scale * (distance / state.zoom->start_distance);
      if (scale != state.zoom_scale) {
        state.zoom_scale = scale;
        out.zoom_scale = scale;
      }
    }
  } else {
    state.zoom.reset();
  }

  for (const Hand h : kHands) state.hand(h).previous_posture = now(h);
  return out;
}

std::vector<Op> run_gestures(const std::vector<HandFrame>& frames, const Graph& graph,
                             const InteractionConfig& config) {
  Graph view = graph;
  GestureState state;
  std::vector<Op> ops;
  for (const auto& frame : frames) {
    for (auto& op : gesture_step(frame, state, view, config).ops) {
      // Keep the local view current; rejected ops are still reported.
      try {
        const std::int64_t seq = view.seq() + 1;
        Op sequenced = op;
        assign_ids(sequenced, seq);
        apply_op(view, sequenced, "local", seq);
      } catch (const GraphError&) {
      }
      ops.push_back(std::move(op));
    }
  }
  return ops;
}

}  // namespace hybridsense
