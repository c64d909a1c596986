#include "hybridsense/interaction/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace hybridsense {
namespace {

using Clock = std::chrono::steady_clock;

void require_keys(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw ScenarioError(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ScenarioError("unknown field \"" + key + "\" in " + where);
}

std::vector<HandFrame> read_frame_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open frame file " + path.string());
  std::vector<HandFrame> frames;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) frames.push_back(hand_frame_from_json(Json::parse(line)));
  return frames;
}

InteractionConfig interaction_from_json(const Json& j) {
  require_keys(j,
               {"grabRadius", "mergeRadius", "linkRadius", "throwSpeed", "pullDistance", "pinchRadius", "standRadius",
                "dwellMs", "touchDepth", "maxRayRange"},
               "interaction");
  InteractionConfig c;
  c.grab_radius = j.value("grabRadius", c.grab_radius);
  c.merge_radius = j.value("mergeRadius", c.merge_radius);
  c.link_radius = j.value("linkRadius", c.link_radius);
  c.throw_speed = j.value("throwSpeed", c.throw_speed);
  c.pull_distance = j.value("pullDistance", c.pull_distance);
  c.pinch_radius = j.value("pinchRadius", c.pinch_radius);
  c.stand_radius = j.value("standRadius", c.stand_radius);
  c.dwell_ms = j.value("dwellMs", c.dwell_ms);
  c.touch_depth = j.value("touchDepth", c.touch_depth);
  c.max_ray_range = j.value("maxRayRange", c.max_ray_range);
  c.validate();
  return c;
}

ScenarioAction action_from_json(const Json& j, const std::filesystem::path& base, const std::string& where) {
  require_keys(j, {"at", "op", "select", "pose", "poseFlood", "frames", "frameFile", "barrier"}, where);
  ScenarioAction action;
  action.at = j.value("at", std::int64_t{0});
  if (action.at < 0) throw ScenarioError(where + ": negative time");
  int kinds = 0;
  for (const char* key : {"op", "select", "pose", "poseFlood", "frames", "frameFile", "barrier"}) kinds += j.contains(key);
  if (kinds != 1) throw ScenarioError(where + " must have exactly one of op, select, pose, poseFlood, frames, frameFile, barrier");

  if (j.contains("op")) {
    action.step = SubmitAction{op_from_json(j["op"])};
  } else if (j.contains("select")) {
    require_keys(j["select"], {"documentId", "nodeIds"}, where + ".select");
    SelectAction s;
    if (const auto it = j["select"].find("documentId"); it != j["select"].end() && !it->is_null())
      s.document = it->get<std::string>();
    s.nodes = j["select"].value("nodeIds", std::set<NodeId>{});
    action.step = s;
  } else if (j.contains("pose")) {
    const auto& p = j["pose"];
    require_keys(p, {"kind", "t", "position", "orientation"}, where + ".pose");
    PoseSample sample;
    sample.kind = pose_kind_from_string(p.value("kind", "head"));
    sample.t = p.value("t", action.at);
    sample.position = vec3_from_json(p.at("position"));
    if (p.contains("orientation")) sample.orientation = quat_from_json(p["orientation"]);
    action.step = PoseAction{sample};
  } else if (j.contains("poseFlood")) {
    const auto& p = j["poseFlood"];
    require_keys(p, {"kind", "hz", "durationMs", "position"}, where + ".poseFlood");
    PoseFloodAction flood;
    flood.kind = pose_kind_from_string(p.value("kind", "head"));
    flood.hz = p.value("hz", flood.hz);
    flood.duration_ms = p.value("durationMs", flood.duration_ms);
    if (p.contains("position")) flood.position = vec3_from_json(p["position"]);
    if (!(flood.hz > 0.0) || flood.duration_ms < 0) throw ScenarioError(where + ": bad pose flood rate or duration");
    action.step = flood;
  } else if (j.contains("frames")) {
    FramesAction frames;
    for (const auto& f : j["frames"]) frames.frames.push_back(hand_frame_from_json(f));
    action.step = frames;
  } else if (j.contains("frameFile")) {
    std::filesystem::path path = j["frameFile"].get<std::string>();
    if (path.is_relative()) path = base / path;
    action.step = FramesAction{read_frame_file(path)};
  } else {
    action.step = BarrierAction{};
  }
  return action;
}

Expectation expectation_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type")) throw ScenarioError(where + " needs a type");
  const auto type = j["type"].get<std::string>();
  if (type == "converged" || type == "gapFree") require_keys(j, {"type"}, where);
  else if (type == "seq" || type == "linkCount") require_keys(j, {"type", "equals"}, where);
  else if (type == "nodeCount") require_keys(j, {"type", "equals", "kind"}, where);
  else if (type == "node") require_keys(j, {"type", "id", "label", "kind", "position", "tolerance"}, where);
  else if (type == "noNode") require_keys(j, {"type", "id", "label"}, where);
  else if (type == "selection") require_keys(j, {"type", "nodeIds", "documentId"}, where);
  else if (type == "error") require_keys(j, {"type", "device", "code", "count"}, where);
  else if (type == "noErrors") require_keys(j, {"type", "device"}, where);
  else throw ScenarioError(where + ": unknown expectation type " + type);
  Json args = j;
  args.erase("type");
  return Expectation{type, args};
}

std::string describe(const Expectation& e) {
  return e.args.empty() ? e.type : e.type + " " + e.args.dump();
}

bool node_matches(const NodeRecord& node, const Json& args) {
  if (args.contains("id") && node.id != args["id"].get<std::string>()) return false;
  if (args.contains("label") && node.label != args["label"].get<std::string>()) return false;
  if (args.contains("kind") && to_string(node.kind) != args["kind"].get<std::string>()) return false;
  if (args.contains("position")) {
    const double tolerance = args.value("tolerance", 1e-9);
    if ((node.position - vec3_from_json(args["position"])).norm() > tolerance) return false;
  }
  return true;
}

ExpectationResult evaluate(const Expectation& e, const std::vector<std::unique_ptr<SyncClient>>& clients,
                           const std::vector<std::vector<Message>>& transcripts) {
  ExpectationResult r{describe(e), true, {}};
  const auto fail = [&](const std::string& detail) {
    r.passed = false;
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += detail;
  };
  const auto& a = e.args;

  if (e.type == "error" || e.type == "noErrors") {
    for (std::size_t i = 0; i < clients.size(); ++i) {
      const auto& device = clients[i]->device();
      if (a.contains("device") && a["device"].get<std::string>() != device) continue;
      std::int64_t matching = 0;
      for (const auto& m : clients[i]->errors())
        if (e.type == "noErrors" || m.payload.value("code", "") == a.value("code", "")) ++matching;
      if (e.type == "noErrors" && matching > 0) fail(device + " received " + std::to_string(matching) + " errors");
      if (e.type == "error") {
        if (a.contains("count") ? matching != a["count"].get<std::int64_t>() : matching == 0)
          fail(device + " received " + std::to_string(matching) + " matching errors");
      }
    }
    return r;
  }

  if (e.type == "converged") {
    std::optional<std::string> reference;
    for (const auto& c : clients) {
      const auto hash = snapshot_hash(c->graph());
      if (!c->consistent()) fail(c->device() + " saw a hash mismatch");
      if (reference && hash != *reference) fail(c->device() + " diverged");
      reference = hash;
    }
    return r;
  }

  if (e.type == "gapFree") {
    for (std::size_t i = 0; i < clients.size(); ++i) {
      std::optional<std::int64_t> last;
      for (const auto& m : transcripts[i]) {
        if (m.type == MessageType::Welcome || m.type == MessageType::Snapshot) {
          last = m.seq;
        } else if (m.type == MessageType::OpApplied || m.type == MessageType::SelectionApplied) {
          if (!last || !m.seq || *m.seq != *last + 1) {
            fail(clients[i]->device() + " saw seq " + (m.seq ? std::to_string(*m.seq) : "null") + " after " +
                 (last ? std::to_string(*last) : "nothing"));
            break;
          }
          last = m.seq;
        }
      }
    }
    return r;
  }

  for (const auto& c : clients) {
    const Graph graph = c->graph();
    const auto& device = c->device();
    if (e.type == "seq") {
      if (graph.seq() != a["equals"].get<std::int64_t>()) fail(device + " at seq " + std::to_string(graph.seq()));
    } else if (e.type == "nodeCount") {
      std::int64_t n = 0;
      for (const auto& [id, node] : graph.nodes())
        if (!a.contains("kind") || to_string(node.kind) == a["kind"].get<std::string>()) ++n;
      if (n != a["equals"].get<std::int64_t>()) fail(device + " has " + std::to_string(n) + " nodes");
    } else if (e.type == "linkCount") {
      if (static_cast<std::int64_t>(graph.links().size()) != a["equals"].get<std::int64_t>())
        fail(device + " has " + std::to_string(graph.links().size()) + " links");
    } else if (e.type == "node" || e.type == "noNode") {
      bool found = false;
      for (const auto& [id, node] : graph.nodes()) found = found || node_matches(node, a);
      if (e.type == "node" && !found) fail(device + " has no matching node");
      if (e.type == "noNode" && found) fail(device + " still has a matching node");
    } else if (e.type == "selection") {
      const auto& s = graph.selection();
      if (a.contains("nodeIds") && s.selected_node_ids != a["nodeIds"].get<std::set<NodeId>>())
        fail(device + " selection is " + Json(s.selected_node_ids).dump());
      if (a.contains("documentId")) {
        const Json doc = s.selected_document_id ? Json(*s.selected_document_id) : Json(nullptr);
        if (doc != a["documentId"]) fail(device + " document selection is " + doc.dump());
      }
    }
  }
  return r;
}

void sleep_until_offset(Clock::time_point start, double offset_ms) {
  std::this_thread::sleep_until(start + std::chrono::microseconds(static_cast<std::int64_t>(offset_ms * 1000.0)));
}

void run_client(const ScenarioClient& spec, SyncClient& client, Clock::time_point start,
                const InteractionConfig& config) {
  GestureState gestures;
  for (const auto& action : spec.actions) {
    sleep_until_offset(start, static_cast<double>(action.at));
    std::visit(
        [&](const auto& step) {
          using T = std::decay_t<decltype(step)>;
          if constexpr (std::is_same_v<T, SubmitAction>) {
            client.submit(step.op);
          } else if constexpr (std::is_same_v<T, SelectAction>) {
            client.select(step.document, step.nodes);
          } else if constexpr (std::is_same_v<T, PoseAction>) {
            auto sample = step.sample;
            sample.device = client.device();
            client.send_pose(sample);
          } else if constexpr (std::is_same_v<T, PoseFloodAction>) {
            const double interval = 1000.0 / step.hz;
            const auto count = static_cast<std::int64_t>(std::floor(step.duration_ms / interval));
            for (std::int64_t i = 0; i < count; ++i) {
              const double offset = static_cast<double>(action.at) + static_cast<double>(i) * interval;
              sleep_until_offset(start, offset);
              client.send_pose(PoseSample{client.device(), step.kind, static_cast<std::int64_t>(std::llround(offset)),
                                          step.position, Quat::Identity()});
            }
          } else if constexpr (std::is_same_v<T, FramesAction>) {
            for (const auto& frame : step.frames) {
              sleep_until_offset(start, static_cast<double>(frame.t));
              for (const auto& op : gesture_step(frame, gestures, client.graph(), config).ops) client.submit(op);
            }
          } else {
            client.barrier();
          }
        },
        action.step);
  }
}

}  // namespace

Scenario scenario_from_json(const Json& j, const std::filesystem::path& base) {
  require_keys(j, {"session", "clients", "expect", "interaction"}, "scenario");
  Scenario scenario;
  scenario.session = j.value("session", scenario.session);
  if (j.contains("interaction")) scenario.interaction = interaction_from_json(j["interaction"]);
  if (!j.contains("clients") || !j["clients"].is_array() || j["clients"].empty())
    throw ScenarioError("scenario needs a non-empty clients array");
  std::set<DeviceId> devices;
  for (std::size_t i = 0; i < j["clients"].size(); ++i) {
    const auto& c = j["clients"][i];
    const std::string where = "clients[" + std::to_string(i) + "]";
    require_keys(c, {"device", "kind", "actions"}, where);
    ScenarioClient client;
    try {
      client.device = c.at("device").get<std::string>();
      client.kind = device_kind_from_string(c.value("kind", "pc"));
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::exception& e) {
      throw ScenarioError(where + ": " + e.what());
    }
    if (!devices.insert(client.device).second) throw ScenarioError(where + ": duplicate device " + client.device);
    std::int64_t last_at = 0;
    for (std::size_t k = 0; k < c.value("actions", Json::array()).size(); ++k) {
      const std::string action_where = where + ".actions[" + std::to_string(k) + "]";
      try {
        client.actions.push_back(action_from_json(c["actions"][k], base, action_where));
      } catch (const ScenarioError&) {
        throw;
      } catch (const std::exception& e) {
        throw ScenarioError(action_where + ": " + e.what());
      }
      if (client.actions.back().at < last_at) throw ScenarioError(action_where + ": timestamps must not decrease");
      last_at = client.actions.back().at;
    }
    scenario.clients.push_back(std::move(client));
  }
  for (std::size_t i = 0; i < j.value("expect", Json::array()).size(); ++i)
    scenario.expect.push_back(expectation_from_json(j["expect"][i], "expect[" + std::to_string(i) + "]"));
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ScenarioError("scenario " + path.string() + " is not JSON: " + e.what());
  }
  return scenario_from_json(j, path.parent_path());
}

bool ScenarioResult::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

ScenarioResult run_scenario(const Scenario& scenario, const Endpoint& server) {
  std::vector<std::unique_ptr<SyncClient>> clients;
  for (const auto& spec : scenario.clients) {
    clients.push_back(std::make_unique<SyncClient>(server, scenario.session, spec.device, spec.kind));
    clients.back()->connect();
  }

  ScenarioResult result;
  std::vector<std::string> failures(clients.size());
  const auto start = Clock::now();
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < clients.size(); ++i)
    threads.emplace_back([&, i] {
      try {
        run_client(scenario.clients[i], *clients[i], start, scenario.interaction);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    });
  for (auto& t : threads) t.join();

  // First round: every client's own messages have been processed. Second
  // round: every client has received every apply.
  for (int round = 0; round < 2; ++round)
    for (auto& c : clients) {
      try {
        c->barrier();
      } catch (const std::exception& e) {
        failures[static_cast<std::size_t>(&c - clients.data())] = e.what();
      }
    }

  for (std::size_t i = 0; i < clients.size(); ++i)
    if (!failures[i].empty())
      result.results.push_back({"client " + clients[i]->device() + " ran", false, failures[i]});

  std::vector<std::vector<Message>> transcripts;
  for (const auto& c : clients) {
    transcripts.push_back(c->transcript());
    for (const auto& m : transcripts.back()) result.transcript.push_back({c->device(), m});
    result.hashes[c->device()] = snapshot_hash(c->graph());
  }
  for (const auto& e : scenario.expect) result.results.push_back(evaluate(e, clients, transcripts));
  for (auto& c : clients) c->close();
  return result;
}

Json to_json(const ScenarioResult& result) {
  Json results = Json::array();
  for (const auto& r : result.results)
    results.push_back({{"expectation", r.description}, {"passed", r.passed}, {"detail", r.detail}});
  Json transcript = Json::array();
  for (const auto& entry : result.transcript) {
    std::string line = encode(entry.message);
    line.pop_back();
    transcript.push_back({{"device", entry.device}, {"message", Json::parse(line)}});
  }
  return Json{{"passed", result.passed()}, {"results", results}, {"hashes", result.hashes}, {"transcript", transcript}};
}

}  // namespace hybridsense
