#pragma once

#include <cstdint>
#include <optional>
#include <vector>

// Large-N behaviour of the cascaded AP-IRS-user link under quantized
// phases: the closed-form received-power ratio eta(b), the closed-form
// average received power, and Monte-Carlo estimators validating both. The
// direct AP-user link is excluded by construction; the reflected power
// dominates it in this regime.

namespace irsim::asymptotics {

/// nullopt encodes continuous phases (b = infinity).
using Bits = std::optional<int>;

struct AsymptoticConfig {
  std::size_t n_elements = 1;
  Bits bits;            // nullopt = continuous
  double rho_h = 1.0;   // amplitude scale of the IRS-user channel
  double rho_g = 1.0;   // amplitude scale of the AP-IRS channel
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

/// (2^b/pi * sin(pi/2^b))^2; 1 for continuous phases. Strictly increasing
/// in b.
double eta(Bits bits);

/// N rh^2 rg^2 + N(N-1) (pi^2 rh^2 rg^2 / 16) eta(b); exact for every N.
double pr_closed_form(const AsymptoticConfig& cfg);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Average |sum_n |h_r(n)||g(n)| e^{j theta_bar_n}|^2 with each element's
/// phase quantized from its continuous optimum. Deterministic per seed and
/// independent of the worker count.
Estimate monte_carlo_pr(const AsymptoticConfig& cfg);

/// Least-squares slope of log(p) against log(n).
double slope_loglog(const std::vector<double>& n, const std::vector<double>& p);

/// Slope of the Monte-Carlo received power across the given element counts.
double power_gain_slope(Bits bits, const std::vector<std::size_t>& n_list,
                        std::size_t trials, std::uint64_t seed,
                        unsigned workers = 0);

}  // namespace irsim::asymptotics
