#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "irsim/harness.hpp"

namespace irsim::harness {

namespace {

using nlohmann::json;

const std::map<std::string, Scenario>& scenario_names() {
  static const std::map<std::string, Scenario> m = {
      {"single_user_distance", Scenario::single_user_distance},
      {"single_user_elements", Scenario::single_user_elements},
      {"multiuser_sinr", Scenario::multiuser_sinr},
      {"multiuser_users", Scenario::multiuser_users},
      {"multiuser_elements", Scenario::multiuser_elements},
      {"asymptotic", Scenario::asymptotic},
  };
  return m;
}

const std::map<std::string, Scheme>& scheme_names() {
  static const std::map<std::string, Scheme> m = {
      {"optimal", Scheme::optimal},
      {"refine", Scheme::refine},
      {"mmse_refine", Scheme::mmse_refine},
      {"quantize", Scheme::quantize},
      {"codebook", Scheme::codebook},
      {"no_irs", Scheme::no_irs},
      {"continuous_baseline", Scheme::continuous_baseline},
  };
  return m;
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& path, std::size_t min) {
  if (!j.is_number_integer() ||
      (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0))
    throw ConfigError(path, "expected a non-negative integer");
  const std::size_t v = j.get<std::size_t>();
  if (v < min)
    throw ConfigError(path, "must be at least " + std::to_string(min));
  return v;
}

// Rician factors may be "inf" (pure LoS).
double get_rician(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf")
      return std::numeric_limits<double>::infinity();
    throw ConfigError(path, "expected a number or \"inf\"");
  }
  const double v = get_number(j, path);
  if (v < 0.0) throw ConfigError(path, "must be >= 0");
  return v;
}

channel::LinkParams parse_link(const json& j, const std::string& path,
                               channel::LinkParams defaults) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  channel::LinkParams p = defaults;
  for (const auto& [key, value] : j.items()) {
    const std::string sub = path + "." + key;
    if (key == "path_loss_exponent") {
      p.path_loss_exponent = get_number(value, sub);
      if (p.path_loss_exponent < 2.0) throw ConfigError(sub, "must be >= 2");
    } else if (key == "rician_factor") {
      p.rician_factor = get_rician(value, sub);
    } else if (key == "reference_loss_db") {
      p.reference_loss_db = get_number(value, sub);
    } else if (key == "antenna_gain_dbi") {
      p.antenna_gain_dbi = get_number(value, sub);
    } else {
      throw ConfigError(sub, "unknown field");
    }
  }
  return p;
}

json link_to_json(const channel::LinkParams& p) {
  json j;
  j["path_loss_exponent"] = p.path_loss_exponent;
  if (std::isinf(p.rician_factor)) {
    j["rician_factor"] = "inf";
  } else {
    j["rician_factor"] = p.rician_factor;
  }
  j["reference_loss_db"] = p.reference_loss_db;
  j["antenna_gain_dbi"] = p.antenna_gain_dbi;
  return j;
}

bool is_zf_based(Scheme s) {
  return s == Scheme::refine || s == Scheme::quantize ||
         s == Scheme::continuous_baseline;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.sweep.empty()) throw ConfigError("sweep", "must be non-empty");
  for (std::size_t i = 1; i < cfg.sweep.size(); ++i) {
    if (!(cfg.sweep[i] > cfg.sweep[i - 1]))
      throw ConfigError("sweep[" + std::to_string(i) + "]",
                        "values must be strictly increasing");
  }
  if (cfg.bits.empty()) throw ConfigError("bits", "must be non-empty");
  for (std::size_t i = 0; i < cfg.bits.size(); ++i) {
    if (cfg.bits[i] < 1 || cfg.bits[i] > 16)
      throw ConfigError("bits[" + std::to_string(i) + "]",
                        "must lie in [1, 16]");
  }
  if (cfg.trials < 1) throw ConfigError("trials", "must be >= 1");
  if (cfg.m_antennas < 1) throw ConfigError("m_antennas", "must be >= 1");
  if (cfg.n_y < 1) throw ConfigError("n_y", "must be >= 1");
  if (cfg.n_z < 1) throw ConfigError("n_z", "must be >= 1");
  if (!(cfg.refine_threshold > 0.0))
    throw ConfigError("refine_threshold", "must be > 0");

  const bool multiuser = cfg.scenario == Scenario::multiuser_sinr ||
                         cfg.scenario == Scenario::multiuser_users ||
                         cfg.scenario == Scenario::multiuser_elements;
  const bool single = cfg.scenario == Scenario::single_user_distance ||
                      cfg.scenario == Scenario::single_user_elements;

  if (cfg.scenario == Scenario::asymptotic) {
    if (!cfg.schemes.empty())
      throw ConfigError("schemes",
                        "the asymptotic scenario selects its own estimators");
    if (!(cfg.rho_h > 0.0)) throw ConfigError("rho_h", "must be > 0");
    if (!(cfg.rho_g > 0.0)) throw ConfigError("rho_g", "must be > 0");
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
      if (cfg.sweep[i] < 1.0 ||
          cfg.sweep[i] != std::floor(cfg.sweep[i]))
        throw ConfigError("sweep[" + std::to_string(i) + "]",
                          "element counts must be positive integers");
    }
    return;
  }

  if (cfg.schemes.empty()) throw ConfigError("schemes", "must be non-empty");
  std::set<Scheme> seen;
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i) {
    if (!seen.insert(cfg.schemes[i]).second)
      throw ConfigError("schemes[" + std::to_string(i) + "]",
                        "duplicate scheme");
  }
  if (single && seen.count(Scheme::mmse_refine))
    throw ConfigError("schemes",
                      "mmse_refine applies to multiuser scenarios only");

  const bool sweeps_elements = cfg.scenario == Scenario::single_user_elements ||
                               cfg.scenario == Scenario::multiuser_elements;
  if (sweeps_elements) {
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
      const double v = cfg.sweep[i];
      if (v < 1.0 || v != std::floor(v) ||
          std::size_t(v) % cfg.n_y != 0)
        throw ConfigError("sweep[" + std::to_string(i) + "]",
                          "element counts must be positive multiples of n_y");
    }
  }

  std::size_t max_users = cfg.n_users;
  if (cfg.scenario == Scenario::multiuser_users) {
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
      const double v = cfg.sweep[i];
      if (v < 1.0 || v > 8.0 || v != std::floor(v))
        throw ConfigError("sweep[" + std::to_string(i) + "]",
                          "user counts must be integers in [1, 8]");
    }
    max_users = std::size_t(cfg.sweep.back());
  }
  if (multiuser) {
    if (cfg.scenario != Scenario::multiuser_users &&
        (cfg.n_users < 1 || cfg.n_users > 8))
      throw ConfigError("n_users", "must lie in [1, 8]");
    const bool zf_needed = std::any_of(cfg.schemes.begin(), cfg.schemes.end(),
                                       is_zf_based);
    if (zf_needed && max_users > cfg.m_antennas)
      throw ConfigError("n_users",
                        "ZF-based schemes require K <= m_antennas");
    if (seen.count(Scheme::optimal)) {
      const std::size_t n_el =
          cfg.scenario == Scenario::multiuser_elements
              ? std::size_t(cfg.sweep.back())
              : cfg.n_y * cfg.n_z;
      const int max_bits = *std::max_element(cfg.bits.begin(), cfg.bits.end());
      if (double(max_bits) * double(n_el) > 20.0)
        throw ConfigError("schemes",
                          "optimal exhaustive search needs L^N <= 2^20");
    }
  }
  if (single) {
    if (seen.count(Scheme::optimal)) {
      const std::size_t n_el =
          cfg.scenario == Scenario::single_user_elements
              ? std::size_t(cfg.sweep.back())
              : cfg.n_y * cfg.n_z;
      const int max_bits = *std::max_element(cfg.bits.begin(), cfg.bits.end());
      if (double(max_bits) * double(n_el) > 30.0)
        throw ConfigError("schemes",
                          "optimal branch-and-bound needs N*bits <= 30");
    }
  }
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& [name, value] : scenario_names()) {
    if (value == s) return name;
  }
  return "?";
}

std::string to_string(Scheme s) {
  for (const auto& [name, value] : scheme_names()) {
    if (value == s) return name;
  }
  return "?";
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("$", "expected a JSON object");
  ExperimentConfig cfg;
  cfg.schemes.clear();

  bool have_scenario = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "scenario") {
      if (!value.is_string())
        throw ConfigError("scenario", "expected a string");
      const auto it = scenario_names().find(value.get<std::string>());
      if (it == scenario_names().end())
        throw ConfigError("scenario",
                          "unknown scenario '" + value.get<std::string>() + "'");
      cfg.scenario = it->second;
      have_scenario = true;
    } else if (key == "m_antennas") {
      cfg.m_antennas = get_count(value, key, 1);
    } else if (key == "n_y") {
      cfg.n_y = get_count(value, key, 1);
    } else if (key == "n_z") {
      cfg.n_z = get_count(value, key, 1);
    } else if (key == "d_x") {
      cfg.d_x = get_number(value, key);
    } else if (key == "d_y") {
      cfg.d_y = get_number(value, key);
    } else if (key == "user_distance") {
      cfg.user_distance = get_number(value, key);
      if (!(cfg.user_distance > 0.0)) throw ConfigError(key, "must be > 0");
    } else if (key == "irs_radius") {
      cfg.irs_radius = get_number(value, key);
      if (!(cfg.irs_radius > 0.0)) throw ConfigError(key, "must be > 0");
    } else if (key == "ap_radius") {
      cfg.ap_radius = get_number(value, key);
      if (!(cfg.ap_radius > 0.0)) throw ConfigError(key, "must be > 0");
    } else if (key == "n_users") {
      cfg.n_users = get_count(value, key, 1);
    } else if (key == "links") {
      if (!value.is_object()) throw ConfigError(key, "expected an object");
      for (const auto& [link, params] : value.items()) {
        const std::string sub = "links." + link;
        if (link == "ap_irs") {
          cfg.ap_irs = parse_link(params, sub, cfg.ap_irs);
        } else if (link == "ap_user") {
          cfg.ap_user = parse_link(params, sub, cfg.ap_user);
        } else if (link == "irs_user") {
          cfg.irs_user = parse_link(params, sub, cfg.irs_user);
        } else {
          throw ConfigError(sub, "unknown link");
        }
      }
    } else if (key == "bits") {
      if (!value.is_array()) throw ConfigError(key, "expected an array");
      cfg.bits.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string sub = "bits[" + std::to_string(i) + "]";
        if (!value[i].is_number_integer())
          throw ConfigError(sub, "expected an integer");
        cfg.bits.push_back(value[i].get<int>());
      }
    } else if (key == "gamma_db") {
      cfg.gamma_db = get_number(value, key);
    } else if (key == "noise_dbm") {
      cfg.noise_dbm = get_number(value, key);
    } else if (key == "sweep") {
      if (!value.is_array()) throw ConfigError(key, "expected an array");
      cfg.sweep.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string sub = "sweep[" + std::to_string(i) + "]";
        cfg.sweep.push_back(get_number(value[i], sub));
      }
    } else if (key == "schemes") {
      if (!value.is_array()) throw ConfigError(key, "expected an array");
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string sub = "schemes[" + std::to_string(i) + "]";
        if (!value[i].is_string()) throw ConfigError(sub, "expected a string");
        const auto it = scheme_names().find(value[i].get<std::string>());
        if (it == scheme_names().end())
          throw ConfigError(sub, "unknown scheme '" +
                                     value[i].get<std::string>() + "'");
        cfg.schemes.push_back(it->second);
      }
    } else if (key == "trials") {
      cfg.trials = get_count(value, key, 1);
    } else if (key == "seed") {
      cfg.seed = get_count(value, key, 0);
    } else if (key == "workers") {
      cfg.workers = unsigned(get_count(value, key, 0));
    } else if (key == "refine_threshold") {
      cfg.refine_threshold = get_number(value, key);
    } else if (key == "node_budget") {
      cfg.node_budget = std::uint64_t(get_count(value, key, 1));
    } else if (key == "rho_h") {
      cfg.rho_h = get_number(value, key);
    } else if (key == "rho_g") {
      cfg.rho_g = get_number(value, key);
    } else if (key == "out") {
      if (!value.is_string()) throw ConfigError(key, "expected a string");
      cfg.out = value.get<std::string>();
    } else {
      throw ConfigError(key, "unknown field");
    }
  }
  if (!have_scenario) throw ConfigError("scenario", "missing required field");

  validate(cfg);
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["scenario"] = to_string(cfg.scenario);
  j["m_antennas"] = cfg.m_antennas;
  j["n_y"] = cfg.n_y;
  j["n_z"] = cfg.n_z;
  j["d_x"] = cfg.d_x;
  j["d_y"] = cfg.d_y;
  j["user_distance"] = cfg.user_distance;
  j["irs_radius"] = cfg.irs_radius;
  j["ap_radius"] = cfg.ap_radius;
  j["n_users"] = cfg.n_users;
  j["links"]["ap_irs"] = link_to_json(cfg.ap_irs);
  j["links"]["ap_user"] = link_to_json(cfg.ap_user);
  j["links"]["irs_user"] = link_to_json(cfg.irs_user);
  j["bits"] = cfg.bits;
  j["gamma_db"] = cfg.gamma_db;
  j["noise_dbm"] = cfg.noise_dbm;
  j["sweep"] = cfg.sweep;
  json schemes = json::array();
  for (Scheme s : cfg.schemes) schemes.push_back(to_string(s));
  j["schemes"] = schemes;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["refine_threshold"] = cfg.refine_threshold;
  j["node_budget"] = cfg.node_budget;
  j["rho_h"] = cfg.rho_h;
  j["rho_g"] = cfg.rho_g;
  j["out"] = cfg.out;
  return j;
}

}  // namespace irsim::harness
