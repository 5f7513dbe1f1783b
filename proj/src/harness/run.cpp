#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <set>

#include "irsim/asymptotics.hpp"
#include "irsim/harness.hpp"
#include "irsim/kernels.hpp"
#include "irsim/mu_phase.hpp"
#include "irsim/parallel.hpp"
#include "irsim/stats.hpp"
#include "irsim/su_phase.hpp"

namespace irsim::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr char kVersion[] = "0.1.0";

using channel::ChannelRealization;
using channel::PhaseVector;

struct Key {
  Scheme scheme;
  int bits;  // value reported in the row; 0 = continuous / n.a.
};

std::vector<Key> expand_keys(const ExperimentConfig& cfg) {
  std::vector<Key> keys;
  for (Scheme s : cfg.schemes) {
    switch (s) {
      case Scheme::optimal:
      case Scheme::refine:
      case Scheme::mmse_refine:
      case Scheme::quantize:
        for (int b : cfg.bits) keys.push_back({s, b});
        break;
      case Scheme::codebook:
        keys.push_back({s, 1});
        break;
      case Scheme::no_irs:
      case Scheme::continuous_baseline:
        keys.push_back({s, 0});
        break;
    }
  }
  return keys;
}

bool has_scheme(const ExperimentConfig& cfg, Scheme s) {
  return std::find(cfg.schemes.begin(), cfg.schemes.end(), s) !=
         cfg.schemes.end();
}

struct TrialCell {
  double watts = kInf;
  double iters = 0.0;
  bool feasible() const { return std::isfinite(watts); }
};

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<PhaseVector> codebook_or_fallback(std::size_t n,
                                              std::uint64_t seed) {
  if (is_pow2(n)) return mu_phase::hadamard_codebook(n);
  return mu_phase::random_pm1_codebook(n, seed);
}

PhaseVector widen_codeword(const PhaseVector& cw, int bits) {
  PhaseVector out{bits, cw.levels};
  for (int& l : out.levels) l <<= (bits - 1);  // same phases {0, pi}
  return out;
}

std::vector<linalg::ComplexVector> matrix_columns(
    const linalg::ComplexMatrix& h) {
  std::vector<linalg::ComplexVector> out(h.cols(),
                                         linalg::ComplexVector(h.rows()));
  for (std::size_t k = 0; k < h.cols(); ++k)
    for (std::size_t m = 0; m < h.rows(); ++m) out[k][m] = h(m, k);
  return out;
}

// Every emitted power must correspond to a precoder meeting the targets.
void recheck_sinr(const std::vector<linalg::ComplexVector>& h,
                  const precoding::Precoder& w, const precoding::SinrSpec& spec,
                  double reported_watts) {
  const std::vector<double> achieved = precoding::sinr(h, w, spec);
  for (std::size_t k = 0; k < achieved.size(); ++k) {
    if (!(achieved[k] >= spec.targets[k] * (1.0 - 1e-6)))
      throw std::logic_error("sinr recheck failed for user " +
                             std::to_string(k));
  }
  if (!(std::abs(w.total_power - reported_watts) <=
        1e-6 * std::max(reported_watts, 1e-300)))
    throw std::logic_error("power recheck failed");
}

// ---------------------------------------------------------------------------
// Geometry per sweep value
// ---------------------------------------------------------------------------

channel::Geometry su_geometry(const ExperimentConfig& cfg, double sweep_value) {
  channel::Geometry geom;
  geom.m_antennas = cfg.m_antennas;
  geom.n_y = cfg.n_y;
  geom.n_z = cfg.scenario == Scenario::single_user_elements
                 ? std::size_t(sweep_value) / cfg.n_y
                 : cfg.n_z;
  geom.ap_ref = {cfg.d_x, 0.0, 0.0};
  geom.irs_ref = {0.0, cfg.d_y, 0.0};
  const double d = cfg.scenario == Scenario::single_user_distance
                       ? sweep_value
                       : cfg.user_distance;
  geom.user_positions = {{cfg.d_x, d, 0.0}};
  return geom;
}

// Four users on a half-circle in front of the IRS and four in front of the
// AP, at uniformly spaced angles offset by half a step.
std::vector<channel::Vec3> candidate_users(const ExperimentConfig& cfg) {
  std::vector<channel::Vec3> near, far;
  for (int i = 0; i < 4; ++i) {
    const double w = std::numbers::pi * (double(i) + 0.5) / 4.0;
    near.push_back({cfg.irs_radius * std::sin(w),
                    cfg.d_y - cfg.irs_radius * std::cos(w), 0.0});
    far.push_back({cfg.d_x + cfg.ap_radius * std::cos(w),
                   cfg.ap_radius * std::sin(w), 0.0});
  }
  std::vector<channel::Vec3> all = near;
  all.insert(all.end(), far.begin(), far.end());
  return all;
}

channel::Geometry mu_geometry(const ExperimentConfig& cfg, double sweep_value,
                              std::size_t users) {
  channel::Geometry geom;
  geom.m_antennas = cfg.m_antennas;
  geom.n_y = cfg.n_y;
  geom.n_z = cfg.scenario == Scenario::multiuser_elements
                 ? std::size_t(sweep_value) / cfg.n_y
                 : cfg.n_z;
  geom.ap_ref = {cfg.d_x, 0.0, 0.0};
  geom.irs_ref = {0.0, cfg.d_y, 0.0};

  const std::vector<channel::Vec3> all = candidate_users(cfg);
  // User sweeps alternate near/far additions; other scenarios activate the
  // near users first.
  static constexpr int kAlternating[8] = {0, 4, 1, 5, 2, 6, 3, 7};
  static constexpr int kNearFirst[8] = {0, 1, 2, 3, 4, 5, 6, 7};
  const int* order = cfg.scenario == Scenario::multiuser_users ? kAlternating
                                                               : kNearFirst;
  for (std::size_t k = 0; k < users; ++k)
    geom.user_positions.push_back(all[order[k]]);
  return geom;
}

// ---------------------------------------------------------------------------
// Single-user trials
// ---------------------------------------------------------------------------

struct SuContext {
  const ExperimentConfig& cfg;
  const std::vector<Key>& keys;
  std::atomic<std::uint64_t>& budget_hits;
};

void run_su_trial(const SuContext& ctx, std::size_t sweep_idx,
                  std::size_t trial, TrialCell* cells, std::size_t stride) {
  const ExperimentConfig& cfg = ctx.cfg;
  const double sv = cfg.sweep[sweep_idx];
  const channel::Geometry geom = su_geometry(cfg, sv);
  const channel::LinkSet links{cfg.ap_irs, cfg.ap_user, cfg.irs_user};
  const ChannelRealization ch =
      channel::generate(geom, links, cfg.seed, trial);
  const su_phase::QuadraticForm q =
      su_phase::build_quadratic(ch.g, ch.h_r[0], ch.h_d[0]);

  const double gamma = channel::db_to_linear(cfg.gamma_db);
  const double sigma2 = channel::dbm_to_watts(cfg.noise_dbm);
  const precoding::SinrSpec spec = precoding::SinrSpec::uniform(1, gamma, sigma2);
  const std::size_t n_el = geom.n_elements();
  const su_phase::RefineOptions ropts{cfg.refine_threshold, 100};

  const auto power_of_gain = [&](double gain) {
    return gain > 0.0 ? gamma * sigma2 / gain : kInf;
  };
  const auto recheck_theta = [&](const PhaseVector& theta, double watts) {
    const linalg::ComplexVector h = channel::combined_channel(ch, theta, 0);
    const precoding::PrecoderResult r = precoding::mrt(h, gamma, sigma2);
    if (!r.ok()) throw std::logic_error("mrt recheck on zero channel");
    recheck_sinr({h}, *r.precoder, spec, watts);
  };

  // Codebook: the selection baseline and the refinement initialization.
  std::vector<PhaseVector> cb;
  std::size_t best_cw = 0;
  double best_cw_gain = -1.0;
  const bool need_cb =
      has_scheme(cfg, Scheme::codebook) || has_scheme(cfg, Scheme::refine);
  if (need_cb) {
    cb = codebook_or_fallback(n_el, cfg.seed);
    for (std::size_t j = 0; j < cb.size(); ++j) {
      const double g = su_phase::objective(q, cb[j]);
      if (g > best_cw_gain) {
        best_cw_gain = g;
        best_cw = j;
      }
    }
  }

  su_phase::ContinuousOutcome cont;
  const bool need_cont = has_scheme(cfg, Scheme::quantize) ||
                         has_scheme(cfg, Scheme::continuous_baseline);
  if (need_cont) {
    const std::vector<double> zeros(n_el, 0.0);
    cont = su_phase::continuous_refinement(q, zeros, ropts);
  }

  for (std::size_t ki = 0; ki < ctx.keys.size(); ++ki) {
    const Key key = ctx.keys[ki];
    TrialCell& cell = cells[ki * stride];
    switch (key.scheme) {
      case Scheme::refine: {
        const PhaseVector theta0 = widen_codeword(cb[best_cw], key.bits);
        const su_phase::RefineOutcome r =
            su_phase::successive_refinement(q, theta0, ropts);
        cell.watts = power_of_gain(r.objective);
        cell.iters = double(r.sweeps);
        if (cell.feasible()) recheck_theta(r.theta, cell.watts);
        break;
      }
      case Scheme::optimal: {
        su_phase::OptimalOptions oopts;
        oopts.node_budget = cfg.node_budget;
        const su_phase::OptimalOutcome o =
            su_phase::solve_optimal(q, key.bits, oopts);
        if (!o.proved_optimal) ++ctx.budget_hits;
        cell.watts = power_of_gain(o.objective);
        cell.iters = double(o.nodes);
        if (cell.feasible()) recheck_theta(o.theta, cell.watts);
        break;
      }
      case Scheme::quantize: {
        const PhaseVector theta = su_phase::quantize(cont.theta, key.bits);
        cell.watts = power_of_gain(su_phase::objective(q, theta));
        cell.iters = double(cont.sweeps);
        if (cell.feasible()) recheck_theta(theta, cell.watts);
        break;
      }
      case Scheme::codebook: {
        cell.watts = power_of_gain(best_cw_gain);
        cell.iters = double(cb.size());
        if (cell.feasible()) recheck_theta(cb[best_cw], cell.watts);
        break;
      }
      case Scheme::continuous_baseline: {
        cell.watts = power_of_gain(cont.objective);
        cell.iters = double(cont.sweeps);
        if (cell.feasible()) {
          const linalg::ComplexMatrix hm = channel::combined_matrix_continuous(
              ch, std::span<const double>(cont.theta));
          linalg::ComplexVector h(hm.rows());
          for (std::size_t m = 0; m < hm.rows(); ++m) h[m] = hm(m, 0);
          const precoding::PrecoderResult r = precoding::mrt(h, gamma, sigma2);
          recheck_sinr({h}, *r.precoder, spec, cell.watts);
        }
        break;
      }
      case Scheme::no_irs: {
        const precoding::PrecoderResult r =
            precoding::mrt(ch.h_d[0], gamma, sigma2);
        if (r.ok()) {
          cell.watts = r.precoder->total_power;
          cell.iters = 1.0;
          recheck_sinr({ch.h_d[0]}, *r.precoder, spec, cell.watts);
        }
        break;
      }
      case Scheme::mmse_refine:
        throw std::logic_error("mmse_refine in a single-user run");
    }
  }
}

// ---------------------------------------------------------------------------
// Multiuser trials
// ---------------------------------------------------------------------------

struct MuContext {
  const ExperimentConfig& cfg;
  const std::vector<Key>& keys;
};

void run_mu_trial(const MuContext& ctx, std::size_t sweep_idx,
                  std::size_t trial, TrialCell* cells, std::size_t stride) {
  const ExperimentConfig& cfg = ctx.cfg;
  const double sv = cfg.sweep[sweep_idx];
  const std::size_t users = cfg.scenario == Scenario::multiuser_users
                                ? std::size_t(sv)
                                : cfg.n_users;
  const double gamma_db =
      cfg.scenario == Scenario::multiuser_sinr ? sv : cfg.gamma_db;
  const channel::Geometry geom = mu_geometry(cfg, sv, users);
  const channel::LinkSet links{cfg.ap_irs, cfg.ap_user, cfg.irs_user};
  const ChannelRealization ch =
      channel::generate(geom, links, cfg.seed, trial);

  const double gamma = channel::db_to_linear(gamma_db);
  const double sigma2 = channel::dbm_to_watts(cfg.noise_dbm);
  const precoding::SinrSpec spec =
      precoding::SinrSpec::uniform(users, gamma, sigma2);
  const std::size_t n_el = geom.n_elements();
  const mu_phase::SweepOptions sopts{cfg.refine_threshold, 100};

  const auto instance = [&](int bits) {
    return mu_phase::MultiuserInstance{ch, spec, bits};
  };
  const auto recheck_theta = [&](const PhaseVector& theta,
                                 const precoding::Precoder& w, double watts) {
    const linalg::ComplexMatrix hm = channel::combined_matrix(ch, theta);
    recheck_sinr(matrix_columns(hm), w, spec, watts);
  };

  const bool need_cb = has_scheme(cfg, Scheme::codebook) ||
                       has_scheme(cfg, Scheme::refine) ||
                       has_scheme(cfg, Scheme::mmse_refine) ||
                       has_scheme(cfg, Scheme::quantize) ||
                       has_scheme(cfg, Scheme::continuous_baseline);
  std::vector<PhaseVector> cb;
  if (need_cb) cb = codebook_or_fallback(n_el, cfg.seed);

  mu_phase::SolveOutcome sel_zf;
  const bool need_zf_sel = has_scheme(cfg, Scheme::refine) ||
                           has_scheme(cfg, Scheme::quantize) ||
                           has_scheme(cfg, Scheme::continuous_baseline);
  if (need_zf_sel)
    sel_zf = mu_phase::codebook_select(instance(1), cb, mu_phase::PrecoderKind::zf);

  mu_phase::SolveOutcome sel_mmse;
  if (has_scheme(cfg, Scheme::codebook) || has_scheme(cfg, Scheme::mmse_refine))
    sel_mmse =
        mu_phase::codebook_select(instance(1), cb, mu_phase::PrecoderKind::mmse);

  mu_phase::ContinuousOutcome cont;
  const bool need_cont = has_scheme(cfg, Scheme::quantize) ||
                         has_scheme(cfg, Scheme::continuous_baseline);
  if (need_cont) {
    std::vector<double> theta0(n_el);
    for (std::size_t n = 0; n < n_el; ++n) theta0[n] = sel_zf.theta.phase(n);
    mu_phase::ContinuousOptions copts;
    copts.threshold = cfg.refine_threshold;
    cont = mu_phase::continuous_zf_refinement(instance(1), theta0, copts);
  }

  for (std::size_t ki = 0; ki < ctx.keys.size(); ++ki) {
    const Key key = ctx.keys[ki];
    TrialCell& cell = cells[ki * stride];
    switch (key.scheme) {
      case Scheme::refine: {
        const mu_phase::SolveOutcome o = mu_phase::zf_refinement(
            instance(key.bits), widen_codeword(sel_zf.theta, key.bits), sopts);
        cell.iters = double(o.iterations);
        if (o.feasible() && o.precoder) {
          cell.watts = o.precoder->total_power;
          recheck_theta(o.theta, *o.precoder, cell.watts);
        }
        break;
      }
      case Scheme::mmse_refine: {
        const mu_phase::SolveOutcome o = mu_phase::mmse_refinement(
            instance(key.bits), widen_codeword(sel_mmse.theta, key.bits),
            sopts);
        cell.iters = double(o.iterations);
        if (o.feasible() && o.precoder) {
          cell.watts = o.precoder->total_power;
          recheck_theta(o.theta, *o.precoder, cell.watts);
        }
        break;
      }
      case Scheme::optimal: {
        const mu_phase::SolveOutcome o = mu_phase::exhaustive_optimal(
            instance(key.bits), mu_phase::PrecoderKind::mmse);
        cell.iters = double(o.iterations);
        if (o.feasible() && o.precoder) {
          cell.watts = o.precoder->total_power;
          recheck_theta(o.theta, *o.precoder, cell.watts);
        }
        break;
      }
      case Scheme::quantize: {
        const PhaseVector theta = su_phase::quantize(cont.theta, key.bits);
        const linalg::ComplexMatrix hm = channel::combined_matrix(ch, theta);
        const precoding::PrecoderResult r =
            precoding::zf(matrix_columns(hm), spec);
        cell.iters = double(cont.sweeps);
        if (r.ok()) {
          cell.watts = r.precoder->total_power;
          recheck_theta(theta, *r.precoder, cell.watts);
        }
        break;
      }
      case Scheme::codebook: {
        cell.iters = double(cb.size());
        if (sel_mmse.feasible() && sel_mmse.precoder) {
          cell.watts = sel_mmse.precoder->total_power;
          recheck_theta(sel_mmse.theta, *sel_mmse.precoder, cell.watts);
        }
        break;
      }
      case Scheme::continuous_baseline: {
        cell.iters = double(cont.sweeps);
        if (std::isfinite(cont.total_power)) {
          const linalg::ComplexMatrix hm = channel::combined_matrix_continuous(
              ch, std::span<const double>(cont.theta));
          const precoding::PrecoderResult r =
              precoding::zf(matrix_columns(hm), spec);
          if (r.ok()) {
            cell.watts = r.precoder->total_power;
            recheck_sinr(matrix_columns(hm), *r.precoder, spec, cell.watts);
          }
        }
        break;
      }
      case Scheme::no_irs: {
        cell.iters = 1.0;
        if (users == 1) {
          const precoding::PrecoderResult r =
              precoding::mrt(ch.h_d[0], gamma, sigma2);
          if (r.ok()) {
            cell.watts = r.precoder->total_power;
            recheck_sinr({ch.h_d[0]}, *r.precoder, spec, cell.watts);
          }
        } else {
          const precoding::PrecoderResult r = precoding::mmse(ch.h_d, spec);
          if (r.ok()) {
            cell.watts = r.precoder->total_power;
            cell.iters = double(r.iterations);
            recheck_sinr(ch.h_d, *r.precoder, spec, cell.watts);
          }
        }
        break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

RunResult run_sweeps(const ExperimentConfig& cfg) {
  const std::vector<Key> keys = expand_keys(cfg);
  const std::size_t n_sweep = cfg.sweep.size();
  const std::size_t n_trials = cfg.trials;
  const std::size_t stride = n_sweep * n_trials;
  std::vector<TrialCell> cells(keys.size() * stride);

  std::atomic<std::uint64_t> budget_hits{0};
  std::mutex error_mutex;
  std::string first_error;

  const bool multiuser = cfg.scenario == Scenario::multiuser_sinr ||
                         cfg.scenario == Scenario::multiuser_users ||
                         cfg.scenario == Scenario::multiuser_elements;
  const SuContext su_ctx{cfg, keys, budget_hits};
  const MuContext mu_ctx{cfg, keys};

  parallel_for(stride, cfg.workers, [&](std::size_t task) {
    const std::size_t sweep_idx = task / n_trials;
    const std::size_t trial = task % n_trials;
    try {
      TrialCell* base = cells.data() + sweep_idx * n_trials + trial;
      if (multiuser) {
        run_mu_trial(mu_ctx, sweep_idx, trial, base, stride);
      } else {
        run_su_trial(su_ctx, sweep_idx, trial, base, stride);
      }
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (first_error.empty()) first_error = e.what();
    }
  });
  if (!first_error.empty())
    throw std::runtime_error("run failed: " + first_error);

  RunResult result;
  for (std::size_t ki = 0; ki < keys.size(); ++ki) {
    for (std::size_t s = 0; s < n_sweep; ++s) {
      std::vector<double> dbm;
      std::vector<double> iters;
      std::size_t infeasible = 0;
      for (std::size_t t = 0; t < n_trials; ++t) {
        const TrialCell& cell = cells[ki * stride + s * n_trials + t];
        if (cell.feasible()) {
          dbm.push_back(channel::watts_to_dbm(cell.watts));
          iters.push_back(cell.iters);
        } else {
          ++infeasible;
        }
      }
      ResultRow row;
      row.scenario = to_string(cfg.scenario);
      row.scheme = to_string(keys[ki].scheme);
      row.sweep_value = cfg.sweep[s];
      row.bits = keys[ki].bits;
      row.trials = n_trials;
      row.infeasible = infeasible;
      if (dbm.empty()) {
        row.power_dbm = kInf;
        row.stderr_db = 0.0;
        row.mean_iterations = 0.0;
      } else {
        row.power_dbm = stats::mean(dbm);
        row.stderr_db = stats::std_error(dbm, row.power_dbm);
        row.mean_iterations = stats::mean(iters);
      }
      result.rows.push_back(std::move(row));
    }
  }

  std::sort(result.rows.begin(), result.rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              if (a.scheme != b.scheme) return a.scheme < b.scheme;
              if (a.bits != b.bits) return a.bits < b.bits;
              return a.sweep_value < b.sweep_value;
            });

  // Notices are derived from the config, not from worker state, so their
  // order is stable.
  const bool needs_codebook =
      has_scheme(cfg, Scheme::codebook) || has_scheme(cfg, Scheme::refine) ||
      has_scheme(cfg, Scheme::mmse_refine) ||
      has_scheme(cfg, Scheme::quantize) ||
      has_scheme(cfg, Scheme::continuous_baseline);
  if (needs_codebook) {
    std::set<std::size_t> orders;
    if (cfg.scenario == Scenario::single_user_elements ||
        cfg.scenario == Scenario::multiuser_elements) {
      for (double v : cfg.sweep) orders.insert(std::size_t(v));
    } else {
      orders.insert(cfg.n_y * cfg.n_z);
    }
    for (std::size_t n : orders) {
      if (!is_pow2(n))
        result.notices.push_back(
            "order-" + std::to_string(n) +
            " Hadamard codebook unavailable; using the seeded random +-1 "
            "codebook");
    }
  }
  if (budget_hits > 0)
    result.notices.push_back(
        "optimal: node budget exhausted on " +
        std::to_string(budget_hits.load()) +
        " instances; incumbent solutions reported");
  return result;
}

RunResult run_asymptotic(const ExperimentConfig& cfg) {
  RunResult result;
  std::vector<asymptotics::Bits> bit_list;
  for (int b : cfg.bits) bit_list.push_back(b);
  bit_list.push_back(std::nullopt);  // continuous reference

  for (const asymptotics::Bits& bits : bit_list) {
    for (double sv : cfg.sweep) {
      asymptotics::AsymptoticConfig acfg;
      acfg.n_elements = std::size_t(sv);
      acfg.bits = bits;
      acfg.rho_h = cfg.rho_h;
      acfg.rho_g = cfg.rho_g;
      acfg.trials = cfg.trials;
      acfg.seed = cfg.seed;
      acfg.workers = cfg.workers;
      const asymptotics::Estimate est = asymptotics::monte_carlo_pr(acfg);

      ResultRow mc;
      mc.scenario = to_string(cfg.scenario);
      mc.scheme = "monte_carlo";
      mc.sweep_value = sv;
      mc.bits = bits.has_value() ? *bits : 0;
      mc.power_dbm = channel::linear_to_db(est.mean);
      mc.trials = est.trials;
      // Delta method for the dB-domain standard error.
      mc.stderr_db = 10.0 / std::numbers::ln10 * est.std_error / est.mean;
      mc.mean_iterations = 0.0;
      result.rows.push_back(std::move(mc));

      ResultRow cf;
      cf.scenario = to_string(cfg.scenario);
      cf.scheme = "closed_form";
      cf.sweep_value = sv;
      cf.bits = bits.has_value() ? *bits : 0;
      cf.power_dbm = channel::linear_to_db(asymptotics::pr_closed_form(acfg));
      cf.trials = 0;
      cf.stderr_db = 0.0;
      cf.mean_iterations = 0.0;
      result.rows.push_back(std::move(cf));
    }
  }

  std::sort(result.rows.begin(), result.rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              if (a.scheme != b.scheme) return a.scheme < b.scheme;
              if (a.bits != b.bits) return a.bits < b.bits;
              return a.sweep_value < b.sweep_value;
            });
  return result;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result = cfg.scenario == Scenario::asymptotic
                         ? run_asymptotic(cfg)
                         : run_sweeps(cfg);
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

nlohmann::json manifest(const ExperimentConfig& cfg, const RunResult& result) {
  nlohmann::json j;
  j["config"] = config_to_json(cfg);
  j["version"] = kVersion;
  j["kernels"] = std::string(kernels::active().name);
  j["wall_time_s"] = result.wall_time_s;
  j["rows"] = result.rows.size();
  j["notices"] = result.notices;
  j["output"] = cfg.out;
  return j;
}

}  // namespace irsim::harness
