#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "irsim/asymptotics.hpp"
#include "irsim/errors.hpp"
#include "irsim/harness.hpp"
#include "irsim/kernels.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitIo = 4;

nlohmann::json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw irsim::harness::IoError("cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw irsim::harness::ConfigError("$", e.what());
  }
  return j;
}

bool select_kernels(const std::string& name) {
  using irsim::kernels::Backend;
  if (name == "auto") return true;
  if (name == "scalar") return irsim::kernels::select(Backend::scalar);
  if (name == "avx2") return irsim::kernels::select(Backend::avx2);
  return false;
}

int run_command(const std::string& config_path, const std::string& preset_name,
                std::optional<std::uint64_t> seed,
                std::optional<std::size_t> trials,
                std::optional<std::string> out,
                std::optional<unsigned> workers) {
  irsim::harness::ExperimentConfig cfg;
  if (!preset_name.empty()) {
    cfg = irsim::harness::preset(preset_name);
  } else {
    cfg = irsim::harness::parse_config(load_json(config_path));
  }
  if (seed) cfg.seed = *seed;
  if (trials) cfg.trials = *trials;
  if (out) cfg.out = *out;
  if (workers) cfg.workers = *workers;

  const irsim::harness::RunResult result = irsim::harness::run(cfg);
  irsim::harness::emit_csv(result.rows, cfg.out);

  std::ofstream mf(cfg.out + ".manifest.json");
  if (!mf) throw irsim::harness::IoError("cannot write manifest");
  mf << irsim::harness::manifest(cfg, result).dump(2) << "\n";

  for (const std::string& notice : result.notices)
    std::cerr << "notice: " << notice << "\n";
  std::cout << cfg.out << ": " << result.rows.size() << " rows in "
            << result.wall_time_s << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-aided MISO downlink power-minimization simulator"};
  app.require_subcommand(1);

  std::string kernels_choice = "auto";
  app.add_option("--kernels", kernels_choice,
                 "kernel backend: auto, scalar, avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  auto* run_cmd = app.add_subcommand("run", "run an experiment sweep");
  std::string config_path, preset_name, out_path;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  unsigned workers = 0;
  bool have_seed = false, have_trials = false, have_out = false,
       have_workers = false;
  auto* copt = run_cmd->add_option("--config", config_path, "config JSON path");
  auto* popt = run_cmd->add_option("--preset", preset_name,
                                   "preset name (fig3, fig4, fig6a, fig6b, "
                                   "fig6c, fig7, fig8, asymptotic)");
  copt->excludes(popt);
  run_cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) {
    have_seed = true;
  });
  run_cmd->add_option("--trials", trials, "Monte-Carlo trials per point")
      ->each([&](const std::string&) { have_trials = true; });
  run_cmd->add_option("--out", out_path, "output CSV path")
      ->each([&](const std::string&) { have_out = true; });
  run_cmd->add_option("--workers", workers, "worker threads (0 = all cores)")
      ->each([&](const std::string&) { have_workers = true; });

  auto* validate_cmd =
      app.add_subcommand("validate", "validate a config file");
  std::string validate_path;
  validate_cmd->add_option("--config", validate_path, "config JSON path")
      ->required();

  auto* eta_cmd =
      app.add_subcommand("eta", "discrete-phase power-loss ratio eta(b)");
  std::string bits_arg;
  eta_cmd->add_option("--bits", bits_arg, "control bits b, or 'inf'")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (!select_kernels(kernels_choice)) {
    std::cerr << "error: kernel backend '" << kernels_choice
              << "' is unavailable on this CPU\n";
    return kExitConfig;
  }

  try {
    if (run_cmd->parsed()) {
      if (config_path.empty() && preset_name.empty()) {
        std::cerr << "error: run needs --config or --preset\n";
        return kExitConfig;
      }
      return run_command(config_path, preset_name,
                         have_seed ? std::optional(seed) : std::nullopt,
                         have_trials ? std::optional(trials) : std::nullopt,
                         have_out ? std::optional(out_path) : std::nullopt,
                         have_workers ? std::optional(workers) : std::nullopt);
    }
    if (validate_cmd->parsed()) {
      irsim::harness::parse_config(load_json(validate_path));
      std::cout << validate_path << ": ok\n";
      return 0;
    }
    if (eta_cmd->parsed()) {
      irsim::asymptotics::Bits bits;
      if (bits_arg != "inf") {
        try {
          bits = std::stoi(bits_arg);
        } catch (...) {
          std::cerr << "error: --bits expects a positive integer or 'inf'\n";
          return kExitConfig;
        }
        if (*bits < 1) {
          std::cerr << "error: --bits expects b >= 1\n";
          return kExitConfig;
        }
      }
      const double value = irsim::asymptotics::eta(bits);
      std::printf("eta = %.12g (%.4f dB)\n", value, 10.0 * std::log10(value));
      return 0;
    }
  } catch (const irsim::harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const irsim::BudgetExceeded& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const irsim::harness::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
