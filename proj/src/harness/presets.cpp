#include <cmath>
#include <limits>

#include "irsim/harness.hpp"

// Scenario presets mirroring the simulation setups of the reference figures:
// ULA at (d_x, 0, 0), URA at (0, d_y, 0), half-wavelength spacing, N_y = 4,
// C0 = -30 dB, sigma^2 = -90 dBm, alpha_Au = 3.5, beta_Au = 0, 3 dBi per
// IRS-terminated link.

namespace irsim::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExperimentConfig base() {
  ExperimentConfig cfg;
  cfg.schemes.clear();
  cfg.ap_user = {3.5, 0.0, -30.0, 0.0};
  cfg.trials = 200;
  cfg.seed = 1;
  return cfg;
}

ExperimentConfig single_user_base() {
  ExperimentConfig cfg = base();
  cfg.ap_irs = {2.2, 0.0, -30.0, 3.0};     // Rayleigh AP-IRS
  cfg.irs_user = {2.8, kInf, -30.0, 3.0};  // LoS IRS-user
  cfg.m_antennas = 4;
  cfg.n_users = 1;
  cfg.gamma_db = 25.0;
  return cfg;
}

ExperimentConfig multiuser_base() {
  ExperimentConfig cfg = base();
  cfg.ap_irs = {2.2, kInf, -30.0, 3.0};   // LoS AP-IRS
  cfg.irs_user = {2.8, 0.0, -30.0, 3.0};  // Rayleigh IRS-user
  cfg.irs_radius = 2.0;
  cfg.ap_radius = 50.0;
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig3", "fig4", "fig6a", "fig6b", "fig6c",
          "fig7", "fig8", "asymptotic"};
}

ExperimentConfig preset(const std::string& name) {
  if (name == "fig3") {
    ExperimentConfig cfg = single_user_base();
    cfg.scenario = Scenario::single_user_distance;
    cfg.n_z = 4;  // N = 16
    cfg.bits = {1};
    cfg.sweep = {20, 25, 30, 35, 40, 45, 48, 50, 52, 55, 58, 60};
    cfg.schemes = {Scheme::continuous_baseline, Scheme::optimal,
                   Scheme::refine,              Scheme::quantize,
                   Scheme::codebook,            Scheme::no_irs};
    cfg.out = "fig3.csv";
    return cfg;
  }
  if (name == "fig4") {
    ExperimentConfig cfg = single_user_base();
    cfg.scenario = Scenario::single_user_elements;
    cfg.user_distance = 50.0;
    cfg.bits = {1, 2};
    cfg.sweep = {16, 40, 80, 120, 160, 200, 240, 280};
    cfg.schemes = {Scheme::continuous_baseline, Scheme::refine,
                   Scheme::quantize};
    cfg.out = "fig4.csv";
    return cfg;
  }
  if (name == "fig6a" || name == "fig6b" || name == "fig6c") {
    ExperimentConfig cfg = multiuser_base();
    cfg.scenario = Scenario::multiuser_sinr;
    cfg.bits = {1};
    cfg.sweep = {15, 18, 21, 24, 27, 30};
    if (name == "fig6a") {
      cfg.m_antennas = 4;
      cfg.n_z = 2;  // N = 8
      cfg.n_users = 2;
      cfg.schemes = {Scheme::optimal,  Scheme::mmse_refine, Scheme::refine,
                     Scheme::quantize, Scheme::codebook,    Scheme::no_irs};
      cfg.out = "fig6a.csv";
    } else {
      cfg.m_antennas = 6;
      cfg.n_z = name == "fig6b" ? 8 : 16;  // N = 32 or 64
      cfg.n_users = 4;
      cfg.schemes = {Scheme::mmse_refine, Scheme::refine, Scheme::quantize,
                     Scheme::codebook, Scheme::no_irs};
      cfg.out = name + ".csv";
    }
    return cfg;
  }
  if (name == "fig7") {
    ExperimentConfig cfg = multiuser_base();
    cfg.scenario = Scenario::multiuser_users;
    cfg.m_antennas = 8;
    cfg.n_z = 12;  // N = 48
    cfg.gamma_db = 15.0;
    cfg.bits = {1};
    cfg.sweep = {1, 2, 3, 4, 5, 6, 7, 8};
    cfg.schemes = {Scheme::mmse_refine, Scheme::refine, Scheme::codebook,
                   Scheme::no_irs};
    cfg.out = "fig7.csv";
    return cfg;
  }
  if (name == "fig8") {
    ExperimentConfig cfg = multiuser_base();
    cfg.scenario = Scenario::multiuser_elements;
    cfg.m_antennas = 6;
    cfg.n_users = 4;
    cfg.gamma_db = 15.0;
    cfg.bits = {1, 2};
    cfg.sweep = {16, 24, 32, 40, 48, 56, 64};
    cfg.schemes = {Scheme::refine, Scheme::no_irs};
    cfg.out = "fig8.csv";
    return cfg;
  }
  if (name == "asymptotic") {
    ExperimentConfig cfg = base();
    cfg.scenario = Scenario::asymptotic;
    cfg.bits = {1, 2};
    cfg.sweep = {100, 200, 400, 800};
    cfg.trials = 100000;
    cfg.rho_h = 1.0;
    cfg.rho_g = 1.0;
    cfg.out = "asymptotic.csv";
    return cfg;
  }
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

}  // namespace irsim::harness
