#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "irsim/asymptotics.hpp"
#include "irsim/rng.hpp"
#include "irsim/su_phase.hpp"

using namespace irsim::asymptotics;
using irsim::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

double to_db(double x) { return 10.0 * std::log10(x); }

AsymptoticConfig config(std::size_t n, Bits bits, std::size_t trials,
                        std::uint64_t seed = 11) {
  AsymptoticConfig cfg;
  cfg.n_elements = n;
  cfg.bits = bits;
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("eta closed form hits the tabulated losses") {
  CHECK(std::abs(to_db(eta(1)) - -3.9) < 0.05);
  CHECK(std::abs(to_db(eta(2)) - -0.9) < 0.05);
  CHECK(std::abs(to_db(eta(3)) - -0.2) < 0.05);
  CHECK(eta(std::nullopt) == 1.0);

  CHECK(eta(1) == doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-15));
  CHECK(eta(2) == doctest::Approx(8.0 / (kPi * kPi)).epsilon(1e-15));
}

TEST_CASE("eta is strictly increasing toward one") {
  CHECK(eta(1) < eta(2));
  CHECK(eta(2) < eta(3));
  CHECK(eta(3) < 1.0);
  CHECK(eta(20) > 1.0 - 1e-9);
}

TEST_CASE("closed-form received power basics") {
  CHECK(pr_closed_form(config(1, 1, 1)) == doctest::Approx(1.0).epsilon(1e-15));
  // N = 2, b = 1: 2 + 2 * (pi^2/16) * (4/pi^2) = 2.5.
  CHECK(pr_closed_form(config(2, 1, 1)) == doctest::Approx(2.5).epsilon(1e-15));

  AsymptoticConfig scaled = config(3, std::nullopt, 1);
  scaled.rho_h = 2.0;
  scaled.rho_g = 0.5;
  const double unit = pr_closed_form(config(3, std::nullopt, 1));
  CHECK(pr_closed_form(scaled) == doctest::Approx(unit).epsilon(1e-12));
}

TEST_CASE("closed-form ratio approaches eta for large N") {
  for (Bits bits : {Bits(1), Bits(2)}) {
    const double ratio = pr_closed_form(config(10000, bits, 1)) /
                         pr_closed_form(config(10000, std::nullopt, 1));
    CHECK(ratio == doctest::Approx(eta(bits)).epsilon(1e-3));
  }
}

TEST_CASE("monte carlo agrees with the exact mean for N = 1") {
  const Estimate est = monte_carlo_pr(config(1, std::nullopt, 50000));
  CHECK(std::abs(est.mean - 1.0) <= 3.0 * est.std_error);
}

TEST_CASE("monte carlo matches the closed form at N = 2, b = 1") {
  const Estimate est = monte_carlo_pr(config(2, 1, 1000000));
  CHECK(est.mean == doctest::Approx(2.5).epsilon(0.01));
}

TEST_CASE("monte carlo tracks the closed form within three standard errors") {
  for (Bits bits : {Bits(1), Bits(2), Bits(3), Bits(std::nullopt)}) {
    const AsymptoticConfig cfg = config(50, bits, 20000);
    const Estimate est = monte_carlo_pr(cfg);
    const double expect = pr_closed_form(cfg);
    CHECK(std::abs(est.mean - expect) <= 3.0 * est.std_error);
    CHECK(est.mean == doctest::Approx(expect).epsilon(0.02));
  }
}

TEST_CASE("quantization errors are uniform on the half-open step") {
  // Kolmogorov-Smirnov check of theta_bar against U[-pi/2^b, pi/2^b).
  Rng rng(5);
  for (int bits : {1, 2}) {
    const std::size_t samples = 100000;
    std::vector<double> err(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      const double optimal = rng.uniform() * 2.0 * kPi;  // -(phi+psi) wrapped
      const irsim::channel::PhaseVector q =
          irsim::su_phase::quantize(std::vector<double>{optimal}, bits);
      err[i] = std::remainder(q.phase(0) - optimal, 2.0 * kPi);
    }
    std::sort(err.begin(), err.end());
    const double half = kPi / double(1 << bits);
    double ks = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      const double cdf = (err[i] + half) / (2.0 * half);
      ks = std::max(ks, std::abs(cdf - double(i + 1) / double(samples)));
      ks = std::max(ks, std::abs(cdf - double(i) / double(samples)));
    }
    CHECK(ks < 0.01);
  }
}

TEST_CASE("mean rotated phasor matches the sinc moment") {
  // E[e^{j theta_bar}] = 2^b/pi sin(pi/2^b), the key moment of the proof.
  Rng rng(6);
  for (int bits : {1, 2, 3}) {
    const std::size_t samples = 200000;
    double acc_re = 0.0, acc_im = 0.0, acc_re2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      const double optimal = rng.uniform() * 2.0 * kPi;
      const irsim::channel::PhaseVector q =
          irsim::su_phase::quantize(std::vector<double>{optimal}, bits);
      const double err = std::remainder(q.phase(0) - optimal, 2.0 * kPi);
      acc_re += std::cos(err);
      acc_im += std::sin(err);
      acc_re2 += std::cos(err) * std::cos(err);
    }
    const double mean_re = acc_re / double(samples);
    const double mean_im = acc_im / double(samples);
    const double var = acc_re2 / double(samples) - mean_re * mean_re;
    const double se = std::sqrt(var / double(samples));
    const double levels = double(1 << bits);
    const double expect = levels / kPi * std::sin(kPi / levels);
    CHECK(std::abs(mean_re - expect) <= 3.0 * se + 1e-9);
    CHECK(std::abs(mean_im) <= 3.0 * se + 1e-3);
  }
}

TEST_CASE("closed-form slope is two in the large-N limit") {
  std::vector<double> n = {1e3, 1e4, 1e5};
  std::vector<double> p;
  for (double v : n)
    p.push_back(pr_closed_form(config(std::size_t(v), 1, 1)));
  const double slope = slope_loglog(n, p);
  CHECK(slope >= 1.99);
  CHECK(slope <= 2.01);
}

TEST_CASE("monte-carlo slope is two for discrete and continuous phases") {
  const std::vector<std::size_t> n_list = {100, 200, 400, 800};
  for (Bits bits : {Bits(1), Bits(std::nullopt)}) {
    const double slope = power_gain_slope(bits, n_list, 4000, 3);
    CHECK(slope >= 1.9);
    CHECK(slope <= 2.1);
  }
}

TEST_CASE("estimates are independent of the worker count") {
  AsymptoticConfig cfg = config(64, 1, 5000);
  cfg.workers = 1;
  const Estimate a = monte_carlo_pr(cfg);
  cfg.workers = 3;
  const Estimate b = monte_carlo_pr(cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}
