#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "irsim/channel.hpp"

// Experiment driver: reads a structured configuration (or a named preset),
// sweeps one variable across Monte-Carlo trials, runs the selected schemes,
// and writes a CSV table plus a JSON run manifest. Powers are averaged in
// the dB domain over feasible trials; infeasible trials are counted per row.

namespace irsim::harness {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class Scenario {
  single_user_distance,
  single_user_elements,
  multiuser_sinr,
  multiuser_users,
  multiuser_elements,
  asymptotic,
};

enum class Scheme {
  optimal,
  refine,
  mmse_refine,
  quantize,
  codebook,
  no_irs,
  continuous_baseline,
};

std::string to_string(Scenario s);
std::string to_string(Scheme s);

struct ExperimentConfig {
  Scenario scenario = Scenario::single_user_distance;

  // Geometry
  std::size_t m_antennas = 4;
  std::size_t n_y = 4;
  std::size_t n_z = 4;          // overridden by the sweep in *_elements runs
  double d_x = 2.0;             // AP reference x (m)
  double d_y = 50.0;            // IRS reference y (m)
  double user_distance = 50.0;  // single-user AP-user distance d (m)
  double irs_radius = 2.0;      // d_I of the near half-circle (m)
  double ap_radius = 50.0;      // d_A of the far half-circle (m)
  std::size_t n_users = 1;      // K, overridden by the sweep in user sweeps

  channel::LinkParams ap_irs{2.2, 0.0, -30.0, 3.0};
  channel::LinkParams ap_user{3.5, 0.0, -30.0, 0.0};
  channel::LinkParams irs_user{2.8, 0.0, -30.0, 3.0};

  std::vector<int> bits{1};
  double gamma_db = 25.0;
  double noise_dbm = -90.0;

  std::vector<double> sweep;
  std::vector<Scheme> schemes;

  std::size_t trials = 200;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  double refine_threshold = 1e-4;
  std::uint64_t node_budget = 1'000'000;

  // asymptotic scenario
  double rho_h = 1.0;
  double rho_g = 1.0;

  std::string out = "results.csv";
};

/// Presets: fig3, fig4, fig6a, fig6b, fig6c, fig7, fig8, asymptotic.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Parses and validates; throws ConfigError with a field path on bad input.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct ResultRow {
  std::string scenario;
  std::string scheme;
  double sweep_value = 0.0;
  int bits = 0;  // 0 = continuous phases / not applicable
  double power_dbm = 0.0;
  std::size_t trials = 0;
  double stderr_db = 0.0;
  double mean_iterations = 0.0;
  std::size_t infeasible = 0;
};

struct RunResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> notices;
  double wall_time_s = 0.0;
};

RunResult run(const ExperimentConfig& cfg);

std::string csv_string(const std::vector<ResultRow>& rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

nlohmann::json manifest(const ExperimentConfig& cfg, const RunResult& result);

}  // namespace irsim::harness
