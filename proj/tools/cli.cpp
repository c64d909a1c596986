#include "cli.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <pthread.h>

#include <CLI11.hpp>

#include "hybridsense/corpus/corpus.hpp"
#include "hybridsense/graph/snapshot.hpp"
#include "hybridsense/interaction/scenario.hpp"
#include "hybridsense/sync/event_log.hpp"
#include "hybridsense/sync/tcp.hpp"

namespace hybridsense::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommandError : std::runtime_error {
  CommandError(std::string code, const std::string& message, int exit_code = kExitBadInput)
      : std::runtime_error(message), code(std::move(code)), exit_code(exit_code) {}
  std::string code;
  int exit_code;
  json extra = json::object();
};

void report_error(std::ostream& err, const std::string& code, const std::string& message, json extra = json::object()) {
  extra["error"] = code;
  extra["message"] = message;
  err << extra.dump() << '\n';
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandError("FileNotFound", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw CommandError("InvalidJson", path.string() + ": " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CommandError("WriteFailed", "cannot write " + path.string());
  out << text;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) throw CommandError("InvalidConfig", what + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; }) == allowed.end())
      throw CommandError("InvalidConfig", what + ": unknown key \"" + key + "\"");
}

template <typename T>
std::optional<T> config_value(const std::optional<json>& config, const char* key) {
  if (!config || !config->contains(key)) return std::nullopt;
  try {
    return config->at(key).get<T>();
  } catch (const json::exception&) {
    throw CommandError("InvalidConfig", std::string("config key \"") + key + "\" has the wrong type");
  }
}

template <typename T>
std::optional<T> first_of(std::initializer_list<std::optional<T>> candidates) {
  for (const auto& c : candidates)
    if (c) return c;
  return std::nullopt;
}

std::optional<double> parse_double(const std::optional<std::string>& text, const std::string& name) {
  if (!text) return std::nullopt;
  try {
    std::size_t used = 0;
    const double value = std::stod(*text, &used);
    if (used != text->size()) throw std::invalid_argument(*text);
    return value;
  } catch (const std::exception&) {
    throw CommandError("InvalidConfig", name + " is not a number: " + *text);
  }
}

Corpus load_or_generate_corpus(const std::optional<std::string>& dir) {
  if (!dir) return generate_corpus(0);
  if (!fs::is_directory(*dir)) throw CommandError("InvalidCorpus", "corpus directory not found: " + *dir);
  try {
    return load_corpus(*dir);
  } catch (const std::exception& e) {
    throw CommandError("InvalidCorpus", e.what());
  }
}

// ---------------------------------------------------------------- serve

int cmd_serve(const ServeSettings& settings, std::ostream& out) {
  if (!(settings.pose_log_hz > 0.0)) throw CommandError("InvalidConfig", "pose log rate must be positive");
  Endpoint listen;
  try {
    listen = Endpoint::parse(settings.listen);
  } catch (const std::exception& e) {
    throw CommandError("InvalidConfig", "bad listen address \"" + settings.listen + "\": " + e.what());
  }
  SessionConfig config;
  config.session_id = settings.session;
  config.pose_log_hz = settings.pose_log_hz;
  config.corpus = load_or_generate_corpus(settings.corpus);
  fs::create_directories(settings.log_dir);
  config.event_log_path = fs::path(settings.log_dir) / (settings.session + ".events.jsonl");
  config.pose_log_path = fs::path(settings.log_dir) / (settings.session + ".poses.jsonl");

  // Block the shutdown signals before any thread starts so sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto session = std::make_shared<Session>(config);
  SyncServer server(session, listen);
  try {
    server.start();
  } catch (const std::exception& e) {
    pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
    throw CommandError("ListenFailed", e.what());
  }
  out << "listening on " << listen.host << ':' << server.port() << " session " << settings.session << " events "
      << config.event_log_path->string() << std::endl;

  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  session->flush();
  out << "stopped at seq " << session->seq() << std::endl;
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  return kExitOk;
}

// ---------------------------------------------------------------- replay

int cmd_replay(const fs::path& log, std::optional<fs::path> snapshot_out, std::ostream& out) {
  Graph graph;
  try {
    graph = persist_and_replay(log);
  } catch (const ReplayError& e) {
    CommandError error("ReplayFailed", e.what());
    error.extra = json{{"lastGoodSeq", e.last_good_seq()}, {"line", e.line()}};
    throw error;
  }
  const fs::path target = snapshot_out.value_or(fs::path(log.string() + ".snapshot.json"));
  write_file(target, canonical_snapshot(graph) + "\n");
  out << "seq " << graph.seq() << "\nhash " << snapshot_hash(graph) << "\nsnapshot " << target.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const fs::path& log_dir, const AnalyticsConfig& config, const fs::path& out_dir, std::ostream& out) {
  if (!fs::is_directory(log_dir)) throw CommandError("FileNotFound", "log directory not found: " + log_dir.string());
  const std::string suffix = ".events.jsonl";
  std::vector<std::string> sessions;
  for (const auto& entry : fs::directory_iterator(log_dir)) {
    const auto name = entry.path().filename().string();
    if (name.size() > suffix.size() && name.ends_with(suffix)) sessions.push_back(name.substr(0, name.size() - suffix.size()));
  }
  if (sessions.empty()) throw CommandError("NoLogs", "no *.events.jsonl files in " + log_dir.string());
  std::sort(sessions.begin(), sessions.end());

  std::vector<StrategyReport> reports;
  for (const auto& name : sessions) {
    std::vector<SessionEvent> events;
    std::vector<PoseSample> poses;
    try {
      events = read_event_log(log_dir / (name + suffix));
      const auto pose_path = log_dir / (name + ".poses.jsonl");
      if (fs::exists(pose_path)) poses = read_pose_log(pose_path);
    } catch (const ReplayError& e) {
      CommandError error("ReplayFailed", e.what());
      error.extra = json{{"session", name}, {"lastGoodSeq", e.last_good_seq()}, {"line", e.line()}};
      throw error;
    }
    auto report = build_report(events, poses, config);
    auto j = to_json(report);
    j["session"] = name;
    write_file(out_dir / (name + ".report.json"), j.dump(2) + "\n");
    write_file(out_dir / (name + ".segments.csv"), segments_csv(report.segments));
    write_file(out_dir / (name + ".counts.csv"), counts_csv(report.interaction_counts));
    out << name << ": " << to_string(report.temporal) << ", " << to_string(report.spatial) << " (pc "
        << report.pc_fraction << ", " << report.switch_count << " switches, user " << report.user_path_m
        << " m, table " << report.table_path_m << " m)\n";
    reports.push_back(std::move(report));
  }
  json summary = json::object();
  for (const auto& [metric, stats] : summarize_reports(reports)) summary[metric] = to_json(stats);
  write_file(out_dir / "summary.json", json{{"sessions", sessions}, {"stats", summary}}.dump(2) + "\n");
  out << reports.size() << " session(s) written to " << out_dir.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const fs::path& scenario_path, const std::optional<std::string>& endpoint,
                 std::optional<std::uint64_t> corpus_seed, const std::optional<fs::path>& transcript_out,
                 std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = load_scenario(scenario_path);
  } catch (const ScenarioError& e) {
    throw CommandError("ScenarioSchema", e.what());
  }

  ScenarioResult result;
  if (endpoint) {
    result = run_scenario(scenario, Endpoint::parse(*endpoint));
  } else {
    SessionConfig config;
    config.session_id = scenario.session;
    if (corpus_seed) config.corpus = generate_corpus(*corpus_seed);
    auto session = std::make_shared<Session>(config);
    SyncServer server(session, Endpoint{"127.0.0.1", 0});
    server.start();
    result = run_scenario(scenario, Endpoint{"127.0.0.1", server.port()});
    server.stop();
  }
  if (transcript_out) write_file(*transcript_out, to_json(result).dump(2) + "\n");

  for (const auto& r : result.results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.description << '\n';
    if (!r.passed) out << "  " << r.detail << '\n';
  }
  if (result.passed()) return kExitOk;
  json failed = json::array();
  for (const auto& r : result.results)
    if (!r.passed) failed.push_back({{"expectation", r.description}, {"detail", r.detail}});
  report_error(err, "ExpectationFailed", "scenario expectations did not hold", json{{"failed", failed}});
  return kExitFailed;
}

// ---------------------------------------------------------------- layout

int cmd_layout(const fs::path& snapshot_path, const std::optional<fs::path>& params_path, const fs::path& out_path,
               std::optional<std::uint64_t> seed, std::ostream& out) {
  Graph graph;
  try {
    graph = graph_from_snapshot(read_json_file(snapshot_path));
  } catch (const CommandError&) {
    throw;
  } catch (const std::exception& e) {
    throw CommandError("InvalidSnapshot", e.what());
  }
  LayoutParams params = params_path ? layout_params_from_json(read_json_file(*params_path)) : LayoutParams{};
  if (seed) params.random_seed = *seed;
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw CommandError("InvalidConfig", e.what());
  }

  std::vector<NodeId> ids;
  std::vector<Vec3> positions;
  std::map<NodeId, std::size_t> index;
  for (const auto& [id, node] : graph.nodes()) {
    index[id] = ids.size();
    ids.push_back(id);
    positions.push_back(node.position);
  }
  std::vector<Edge> edges;
  for (const auto& [id, link] : graph.links()) edges.emplace_back(index.at(link.source_id), index.at(link.target_id));

  const auto projected = project_to_plane(positions);
  const auto refined = force_refine(projected, edges, params);
  json positions2 = json::object();
  for (std::size_t i = 0; i < ids.size(); ++i) positions2[ids[i]] = {refined[i].x(), refined[i].y()};
  const json metrics{{"clutterBefore", clutter_metric(projected, edges)},
                     {"clutterAfter", clutter_metric(refined, edges)},
                     {"iterations", params.iteration_count},
                     {"seed", params.random_seed}};
  write_file(out_path, json{{"positions2", positions2}}.dump(2) + "\n");
  fs::path metrics_path = out_path;
  metrics_path.replace_extension(".metrics.json");
  write_file(metrics_path, metrics.dump(2) + "\n");
  out << ids.size() << " nodes laid out; clutter " << metrics["clutterBefore"] << " -> " << metrics["clutterAfter"]
      << "\npositions " << out_path.string() << "\nmetrics " << metrics_path.string() << '\n';
  return kExitOk;
}

}  // namespace

ServeSettings resolve_serve_settings(const ServeOverrides& flags, const EnvLookup& env, const json& file) {
  std::optional<json> config_file;
  if (!file.is_null()) config_file.emplace(file);
  if (config_file) check_keys(*config_file, {"listen", "session", "corpus", "poseLogHz", "logDir"}, "serve config");
  const auto from_env = [&](const char* name) { return env ? env(name) : std::nullopt; };
  ServeSettings s;
  s.listen = first_of({flags.listen, from_env("HYBRIDSENSE_LISTEN"), config_value<std::string>(config_file, "listen")})
                 .value_or(s.listen);
  s.session =
      first_of({flags.session, from_env("HYBRIDSENSE_SESSION"), config_value<std::string>(config_file, "session")})
          .value_or(s.session);
  s.corpus = first_of({flags.corpus, from_env("HYBRIDSENSE_CORPUS"), config_value<std::string>(config_file, "corpus")});
  s.log_dir = first_of({flags.log_dir, from_env("HYBRIDSENSE_LOG_DIR"), config_value<std::string>(config_file, "logDir")})
                  .value_or(s.log_dir);
  s.pose_log_hz = first_of({flags.pose_log_hz, parse_double(from_env("HYBRIDSENSE_POSE_LOG_HZ"), "HYBRIDSENSE_POSE_LOG_HZ"),
                            config_value<double>(config_file, "poseLogHz")})
                      .value_or(s.pose_log_hz);
  return s;
}

AnalyticsConfig resolve_analytics_config(const AnalyzeOverrides& flags, const json& file) {
  std::optional<json> config_file;
  if (!file.is_null()) config_file.emplace(file);
  AnalyticsConfig c;
  if (config_file) {
    check_keys(*config_file,
               {"switchThreshold", "dwellMs", "jitterFloor", "maxGazeRange", "pcDominantFraction",
                "vrDominantFraction", "userPathThreshold", "tablePathThreshold", "userDevice", "calibrationOffset",
                "screen"},
               "analyze config");
    c.switch_threshold = config_value<int>(config_file, "switchThreshold").value_or(c.switch_threshold);
    c.min_dwell_ms = config_value<std::int64_t>(config_file, "dwellMs").value_or(c.min_dwell_ms);
    c.jitter_floor = config_value<double>(config_file, "jitterFloor").value_or(c.jitter_floor);
    c.max_gaze_range = config_value<double>(config_file, "maxGazeRange").value_or(c.max_gaze_range);
    c.pc_dominant_fraction = config_value<double>(config_file, "pcDominantFraction").value_or(c.pc_dominant_fraction);
    c.vr_dominant_fraction = config_value<double>(config_file, "vrDominantFraction").value_or(c.vr_dominant_fraction);
    c.user_path_threshold = config_value<double>(config_file, "userPathThreshold").value_or(c.user_path_threshold);
    c.table_path_threshold = config_value<double>(config_file, "tablePathThreshold").value_or(c.table_path_threshold);
    c.user_device = config_value<std::string>(config_file, "userDevice");
    try {
      if (config_file->contains("calibrationOffset")) {
        const auto& o = config_file->at("calibrationOffset");
        check_keys(o, {"position", "orientation"}, "calibrationOffset");
        c.calibration_offset = Pose{vec3_from_json(o.at("position")), quat_from_json(o.at("orientation"))};
      }
      if (config_file->contains("screen")) {
        const auto& s = config_file->at("screen");
        check_keys(s, {"diagonalInches", "resolution", "position", "orientation"}, "screen");
        const auto resolution = s.value("resolution", std::vector<int>{c.screen.resolution_w, c.screen.resolution_h});
        if (resolution.size() != 2) throw CommandError("InvalidConfig", "screen resolution must be [w, h]");
        Pose pose = c.screen.pose;
        if (s.contains("position")) pose.position = vec3_from_json(s.at("position"));
        if (s.contains("orientation")) pose.orientation = quat_from_json(s.at("orientation"));
        c.screen = ScreenGeometry::from_diagonal(s.value("diagonalInches", c.screen.diagonal_inches), resolution[0],
                                                 resolution[1], pose);
      }
    } catch (const CommandError&) {
      throw;
    } catch (const std::exception& e) {
      throw CommandError("InvalidConfig", e.what());
    }
  }
  if (flags.switch_threshold) c.switch_threshold = *flags.switch_threshold;
  if (flags.dwell_ms) c.min_dwell_ms = *flags.dwell_ms;
  if (flags.jitter_floor) c.jitter_floor = *flags.jitter_floor;
  if (c.min_dwell_ms < 0 || c.jitter_floor < 0 || c.switch_threshold < 0)
    throw CommandError("InvalidConfig", "dwell, jitter floor and switch threshold must be non-negative");
  return c;
}

LayoutParams layout_params_from_json(const json& j) {
  check_keys(j,
             {"idealEdgeLength", "repulsionConstant", "iterationCount", "initialTemperature", "coolingFactor",
              "randomSeed"},
             "layout params");
  const std::optional<json> config(std::in_place, j);
  LayoutParams p;
  p.ideal_edge_length = config_value<double>(config, "idealEdgeLength").value_or(p.ideal_edge_length);
  p.repulsion_constant = config_value<double>(config, "repulsionConstant").value_or(p.repulsion_constant);
  p.iteration_count = config_value<int>(config, "iterationCount").value_or(p.iteration_count);
  p.initial_temperature = config_value<double>(config, "initialTemperature").value_or(p.initial_temperature);
  p.cooling_factor = config_value<double>(config, "coolingFactor").value_or(p.cooling_factor);
  p.random_seed = config_value<std::uint64_t>(config, "randomSeed").value_or(p.random_seed);
  return p;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  CLI::App app{"HybridSense sensemaking server and tools", "hybridsense"};
  app.require_subcommand(1);

  auto* serve = app.add_subcommand("serve", "Host a shared session and log its events and poses");
  ServeOverrides serve_flags;
  std::optional<std::string> serve_config;
  serve->add_option("--listen", serve_flags.listen, "host:port to listen on");
  serve->add_option("--session", serve_flags.session, "Session id");
  serve->add_option("--corpus", serve_flags.corpus, "Corpus directory (default: generated, seed 0)");
  serve->add_option("--pose-log-hz", serve_flags.pose_log_hz, "Pose logging rate");
  serve->add_option("--log-dir", serve_flags.log_dir, "Directory for event and pose logs");
  serve->add_option("--config", serve_config, "JSON config file");

  auto* generate = app.add_subcommand("generate-corpus", "Write a synthetic corpus with the study's shape");
  std::uint64_t corpus_seed = 0;
  std::string corpus_out;
  generate->add_option("--seed", corpus_seed, "Generator seed");
  generate->add_option("--out", corpus_out, "Output directory")->required();

  auto* replay = app.add_subcommand("replay", "Replay an event log into a snapshot and hash");
  std::string replay_log;
  std::optional<std::string> replay_out;
  replay->add_option("log", replay_log, "Event log (JSONL)")->required();
  replay->add_option("--out", replay_out, "Snapshot file (default: <log>.snapshot.json)");

  auto* analyze = app.add_subcommand("analyze", "Classify logged sessions into strategies");
  std::string analyze_dir, analyze_out;
  std::optional<std::string> analyze_config;
  AnalyzeOverrides analyze_flags;
  analyze->add_option("logDir", analyze_dir, "Directory of <session>.events.jsonl / .poses.jsonl")->required();
  analyze->add_option("--config", analyze_config, "JSON analytics config");
  analyze->add_option("--out", analyze_out, "Output directory (default: logDir)");
  analyze->add_option("--switch-threshold", analyze_flags.switch_threshold, "Switches per session for FrequentSwitch");
  analyze->add_option("--dwell-ms", analyze_flags.dwell_ms, "Gaze hysteresis dwell");
  analyze->add_option("--jitter-floor", analyze_flags.jitter_floor, "Minimum counted step in meters");

  auto* simulate = app.add_subcommand("simulate", "Run a scripted multi-device scenario");
  std::string scenario_path;
  std::optional<std::string> endpoint, transcript_out;
  std::optional<std::uint64_t> simulate_corpus_seed;
  simulate->add_option("scenario", scenario_path, "Scenario JSON")->required();
  simulate->add_option("--endpoint", endpoint, "Server host:port (default: in-process server)");
  simulate->add_option("--corpus-seed", simulate_corpus_seed, "Seed anchors from a generated corpus (in-process only)");
  simulate->add_option("--transcript", transcript_out, "Write transcript and results as JSON");

  auto* layout = app.add_subcommand("layout", "Project and refine a snapshot's node positions in 2D");
  std::string layout_snapshot, layout_out;
  std::optional<std::string> layout_params;
  std::optional<std::uint64_t> layout_seed;
  layout->add_option("snapshot", layout_snapshot, "Snapshot JSON")->required();
  layout->add_option("--params", layout_params, "Layout params JSON");
  layout->add_option("--seed", layout_seed, "Overrides randomSeed");
  layout->add_option("--out", layout_out, "positions2 JSON; metrics go next to it")->required();

  std::vector<const char*> argv{"hybridsense"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "Usage", e.what());
    return kExitBadInput;
  }

  try {
    if (*serve) {
      const auto settings = resolve_serve_settings(
          serve_flags, env, serve_config ? read_json_file(*serve_config) : json(nullptr));
      return cmd_serve(settings, out);
    }
    if (*generate) {
      const auto corpus = generate_corpus(corpus_seed);
      write_corpus(corpus, corpus_out);
      out << corpus.documents.size() << " documents written to " << corpus_out << '\n';
      for (const auto& [subplot, words] : corpus.manifest.total_word_counts)
        out << "  " << subplot << ": " << words << " words\n";
      return kExitOk;
    }
    if (*replay) return cmd_replay(replay_log, replay_out ? std::optional<fs::path>(*replay_out) : std::nullopt, out);
    if (*analyze) {
      const auto config = resolve_analytics_config(
          analyze_flags, analyze_config ? read_json_file(*analyze_config) : json(nullptr));
      return cmd_analyze(analyze_dir, config, analyze_out.empty() ? analyze_dir : analyze_out, out);
    }
    if (*simulate)
      return cmd_simulate(scenario_path, endpoint, simulate_corpus_seed,
                          transcript_out ? std::optional<fs::path>(*transcript_out) : std::nullopt, out, err);
    if (*layout)
      return cmd_layout(layout_snapshot, layout_params ? std::optional<fs::path>(*layout_params) : std::nullopt,
                        layout_out, layout_seed, out);
  } catch (const CommandError& e) {
    report_error(err, e.code, e.what(), e.extra);
    return e.exit_code;
  } catch (const std::exception& e) {
    report_error(err, "Failed", e.what());
    return kExitFailed;
  }
  return kExitBadInput;
}

}  // namespace hybridsense::cli
