#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridsense/analytics/analytics.hpp"
#include "hybridsense/layout/layout.hpp"

namespace hybridsense::cli {

// Exit codes: 0 success, 1 the command ran but failed (e.g. an expectation),
// 2 bad input (flags, config, schema, files).
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitBadInput = 2;

struct ServeSettings {
  std::string listen = "0.0.0.0:7878";
  std::string session = "default";
  std::optional<std::string> corpus;  // directory; absent = generated, seed 0
  double pose_log_hz = 10.0;
  std::string log_dir = "logs";
};

struct ServeOverrides {
  std::optional<std::string> listen, session, corpus, log_dir;
  std::optional<double> pose_log_hz;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// flags > environment (HYBRIDSENSE_*) > config file > defaults. A null
// config_file means no file.
ServeSettings resolve_serve_settings(const ServeOverrides& flags, const EnvLookup& env,
                                     const nlohmann::json& config_file = nullptr);

struct AnalyzeOverrides {
  std::optional<int> switch_threshold;
  std::optional<std::int64_t> dwell_ms;
  std::optional<double> jitter_floor;
};

// flags > config file > defaults. Unknown config keys are rejected.
AnalyticsConfig resolve_analytics_config(const AnalyzeOverrides& flags, const nlohmann::json& config_file = nullptr);

LayoutParams layout_params_from_json(const nlohmann::json& j);

// Entry point shared by the executable and the tests. `serve` blocks until
// SIGINT or SIGTERM.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = nullptr);

}  // namespace hybridsense::cli
