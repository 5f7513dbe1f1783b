#include "irsim/asymptotics.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "irsim/kernels.hpp"
#include "irsim/parallel.hpp"
#include "irsim/rng.hpp"
#include "irsim/stats.hpp"
#include "irsim/su_phase.hpp"

namespace irsim::asymptotics {

namespace {

constexpr double kPi = std::numbers::pi;

using kernels::cplx;

double trial_power(const AsymptoticConfig& cfg, std::uint64_t trial) {
  const std::size_t n = cfg.n_elements;
  std::vector<cplx> h(n), g(n), z(n);
  Rng rng = Rng::substream(cfg.seed, trial, 0);
  for (std::size_t i = 0; i < n; ++i) h[i] = rng.cnormal(cfg.rho_h * cfg.rho_h);
  for (std::size_t i = 0; i < n; ++i) g[i] = rng.cnormal(cfg.rho_g * cfg.rho_g);
  kernels::cmul_conj(h, g, z);

  if (!cfg.bits.has_value()) {
    const double s = kernels::abs_sum(z);
    return s * s;
  }
  const int bits = *cfg.bits;
  if (bits == 1) {
    const cplx w = kernels::rotate_sum_b1(z);
    return std::norm(w);
  }
  if (bits == 2) {
    const cplx w = kernels::rotate_sum_b2(z);
    return std::norm(w);
  }
  // Generic resolution: quantize the per-element continuous optimum
  // -arg(z_n), then rotate and sum.
  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = -std::arg(z[i]);
  const channel::PhaseVector theta = su_phase::quantize(target, bits);
  const std::vector<cplx> units = channel::level_units(bits);
  cplx w(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) w += z[i] * units[theta.levels[i]];
  return std::norm(w);
}

}  // namespace

double eta(Bits bits) {
  if (!bits.has_value()) return 1.0;
  assert(*bits >= 1);
  const double levels = double(std::uint64_t(1) << *bits);
  const double m = levels / kPi * std::sin(kPi / levels);
  return m * m;
}

double pr_closed_form(const AsymptoticConfig& cfg) {
  const double n = double(cfg.n_elements);
  const double scale = cfg.rho_h * cfg.rho_h * cfg.rho_g * cfg.rho_g;
  return n * scale + n * (n - 1.0) * (kPi * kPi * scale / 16.0) * eta(cfg.bits);
}

Estimate monte_carlo_pr(const AsymptoticConfig& cfg) {
  assert(cfg.trials >= 1);
  std::vector<double> values(cfg.trials);
  parallel_for(cfg.trials, cfg.workers,
               [&](std::size_t t) { values[t] = trial_power(cfg, t); });
  Estimate est;
  est.trials = cfg.trials;
  est.mean = stats::mean(values);
  est.std_error = stats::std_error(values, est.mean);
  return est;
}

double slope_loglog(const std::vector<double>& n, const std::vector<double>& p) {
  assert(n.size() == p.size() && n.size() >= 2);
  const double count = double(n.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double x = std::log(n[i]);
    const double y = std::log(p[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double power_gain_slope(Bits bits, const std::vector<std::size_t>& n_list,
                        std::size_t trials, std::uint64_t seed,
                        unsigned workers) {
  assert(n_list.size() >= 3);
  std::vector<double> ns, ps;
  for (std::size_t n : n_list) {
    AsymptoticConfig cfg;
    cfg.n_elements = n;
    cfg.bits = bits;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.workers = workers;
    ns.push_back(double(n));
    ps.push_back(monte_carlo_pr(cfg).mean);
  }
  return slope_loglog(ns, ps);
}

}  // namespace irsim::asymptotics
