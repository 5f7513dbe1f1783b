#include "irsim/mu_phase.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <string>

#include "irsim/kernels.hpp"
#include "irsim/rng.hpp"

namespace irsim::mu_phase {

namespace {

std::vector<ComplexVector> columns(const ComplexMatrix& h) {
  std::vector<ComplexVector> out(h.cols(), ComplexVector(h.rows()));
  for (std::size_t k = 0; k < h.cols(); ++k)
    for (std::size_t m = 0; m < h.rows(); ++m) out[k][m] = h(m, k);
  return out;
}

// Inner power evaluator shared by the refinement sweeps and the enumerative
// searches. Keeps the previous MMSE duals as a warm start: adjacent
// candidates differ in one phase level, so the fixed point moves little.
class InnerPower {
 public:
  InnerPower(const SinrSpec& spec, PrecoderKind kind)
      : spec_(spec), kind_(kind) {}

  double operator()(const ComplexMatrix& h) {
    if (kind_ == PrecoderKind::zf) return zf_power_from_channel(h, spec_);
    precoding::MmseOptions opts;
    opts.lambda0 = warm_lambda_;
    const precoding::PrecoderResult r = precoding::mmse(columns(h), spec_, opts);
    if (!r.lambda.empty()) warm_lambda_ = r.lambda;
    if (!r.ok()) return kInfinitePower;
    return r.precoder->total_power;
  }

 private:
  const SinrSpec& spec_;
  PrecoderKind kind_;
  std::vector<double> warm_lambda_;
};

// Fresh solve at the final phases for the returned precoder.
std::optional<precoding::Precoder> final_precoder(const MultiuserInstance& inst,
                                                  const PhaseVector& theta,
                                                  PrecoderKind kind) {
  const ComplexMatrix h = channel::combined_matrix(inst.channels, theta);
  const precoding::PrecoderResult r =
      kind == PrecoderKind::zf ? precoding::zf(columns(h), inst.spec)
                               : precoding::mmse(columns(h), inst.spec);
  if (!r.ok()) return std::nullopt;
  return r.precoder;
}

// H(:,k) += conj(du) * h_r[k](n) * conj(G(n,:)) after theta_n changes by du
// in the e^{j theta} domain.
void apply_element_delta(const MultiuserInstance& inst, ComplexMatrix& h,
                         std::size_t n, cplx du) {
  const std::size_t m_ant = inst.m_antennas();
  const cplx cdu = std::conj(du);
  for (std::size_t k = 0; k < inst.n_users(); ++k) {
    const cplx scale = cdu * inst.channels.h_r[k][n];
    for (std::size_t m = 0; m < m_ant; ++m)
      h(m, k) += scale * std::conj(inst.channels.g(n, m));
  }
}

SolveOutcome refinement_sweep(const MultiuserInstance& inst,
                              const PhaseVector& theta0,
                              const SweepOptions& opts, PrecoderKind kind) {
  assert(opts.threshold > 0.0);
  const std::size_t n_el = inst.n_elements();
  const std::vector<cplx> units = channel::level_units(theta0.bits);
  const int n_levels = int(units.size());

  InnerPower inner(inst.spec, kind);

  SolveOutcome out;
  out.theta = theta0;
  ComplexMatrix h = channel::combined_matrix(inst.channels, theta0);
  double power = inner(h);
  out.trace.push_back(power);

  ComplexMatrix cand;
  int sweeps = 0;
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    const double start = power;
    for (std::size_t n = 0; n < n_el; ++n) {
      int best_level = out.theta.levels[n];
      double best_power = power;  // cached evaluation of the current level
      for (int l = 0; l < n_levels; ++l) {
        if (l == out.theta.levels[n]) continue;
        cand = h;
        apply_element_delta(inst, cand, n,
                            units[l] - units[out.theta.levels[n]]);
        const double p = inner(cand);
        if (p < best_power || (p == best_power && l < best_level)) {
          best_power = p;
          best_level = l;
        }
      }
      if (best_level != out.theta.levels[n]) {
        apply_element_delta(inst, h, n,
                            units[best_level] - units[out.theta.levels[n]]);
        out.theta.levels[n] = best_level;
        power = best_power;
      }
      out.trace.push_back(power);
    }
    sweeps = sweep;
    if (std::isinf(power)) break;  // nothing feasible in a full sweep
    if (std::isinf(start)) continue;
    const double frac = (start - power) / start;
    if (frac < opts.threshold) {
      out.converged = true;
      break;
    }
  }

  out.iterations = sweeps;
  if (std::isinf(power)) {
    out.status = OutcomeStatus::all_infeasible;
    out.total_power = kInfinitePower;
    return out;
  }
  out.total_power = power;
  out.precoder = final_precoder(inst, out.theta, kind);
  if (!out.precoder) {
    out.status = OutcomeStatus::all_infeasible;
    out.total_power = kInfinitePower;
  }
  return out;
}

}  // namespace

double zf_power_from_channel(const ComplexMatrix& h, const SinrSpec& spec) {
  const std::size_t users = h.cols();
  assert(h.rows() >= users);
  const ComplexMatrix gram = linalg::matmul(linalg::hermitian(h), h);
  ComplexMatrix inv;
  try {
    inv = linalg::solve_linear_multi(gram, ComplexMatrix::identity(users));
  } catch (const linalg::SingularMatrix&) {
    return kInfinitePower;
  }
  double power = 0.0;
  for (std::size_t k = 0; k < users; ++k)
    power += spec.targets[k] * spec.noise_powers[k] * inv(k, k).real();
  return power;
}

double zf_power(const MultiuserInstance& inst, const PhaseVector& theta) {
  const ComplexMatrix h = channel::combined_matrix(inst.channels, theta);
  return zf_power_from_channel(h, inst.spec);
}

SolveOutcome zf_refinement(const MultiuserInstance& inst,
                           const PhaseVector& theta0,
                           const SweepOptions& opts) {
  return refinement_sweep(inst, theta0, opts, PrecoderKind::zf);
}

SolveOutcome mmse_refinement(const MultiuserInstance& inst,
                             const PhaseVector& theta0,
                             const SweepOptions& opts) {
  return refinement_sweep(inst, theta0, opts, PrecoderKind::mmse);
}

SolveOutcome exhaustive_optimal(const MultiuserInstance& inst,
                                PrecoderKind kind, bool force) {
  const std::size_t n_el = inst.n_elements();
  const int bits = inst.bits;
  const double total = std::pow(double(1 << bits), double(n_el));
  if (!force && total > double(1 << 20)) {
    throw BudgetExceeded("exhaustive_optimal: L^N > 2^20; pass force to override");
  }

  InnerPower inner(inst.spec, kind);
  const std::uint64_t count = std::uint64_t(total);

  SolveOutcome out;
  out.theta = PhaseVector::zeros(n_el, bits);
  PhaseVector theta = PhaseVector::zeros(n_el, bits);
  const int n_levels = 1 << bits;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    const ComplexMatrix h = channel::combined_matrix(inst.channels, theta);
    const double p = inner(h);
    if (p < out.total_power) {
      out.total_power = p;
      out.theta = theta;
    }
    out.trace.push_back(out.total_power);
    // odometer increment, element 0 fastest
    for (std::size_t n = 0; n < n_el; ++n) {
      if (++theta.levels[n] < n_levels) break;
      theta.levels[n] = 0;
    }
  }
  out.iterations = int(count);
  out.converged = true;
  if (std::isinf(out.total_power)) {
    out.status = OutcomeStatus::all_infeasible;
    return out;
  }
  out.precoder = final_precoder(inst, out.theta, kind);
  return out;
}

std::vector<PhaseVector> hadamard_codebook(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw UnsupportedOrder("hadamard_codebook: order " + std::to_string(n) +
                           " has no implemented construction");
  }
  // Sylvester recursion on +-1 entries; sign(i,j) = parity of popcount(i & j).
  std::vector<PhaseVector> codebook(n);
  for (std::size_t j = 0; j < n; ++j) {
    codebook[j].bits = 1;
    codebook[j].levels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int parity = __builtin_parityll(i & j);
      codebook[j].levels[i] = parity;  // +1 -> 0, -1 -> pi
    }
  }
  return codebook;
}

std::vector<PhaseVector> random_pm1_codebook(std::size_t n, std::uint64_t seed) {
  std::vector<PhaseVector> codebook(n);
  Rng rng(seed);
  for (std::size_t j = 0; j < n; ++j) {
    codebook[j].bits = 1;
    codebook[j].levels.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      codebook[j].levels[i] = rng.uniform() < 0.5 ? 0 : 1;
  }
  return codebook;
}

ContinuousOutcome continuous_zf_refinement(const MultiuserInstance& inst,
                                           const std::vector<double>& theta0,
                                           const ContinuousOptions& opts) {
  const std::size_t n_el = inst.n_elements();
  assert(theta0.size() == n_el);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr double kGolden = 0.61803398874989484820;

  ContinuousOutcome out;
  out.theta = theta0;
  ComplexMatrix h = channel::combined_matrix_continuous(inst.channels, theta0);
  double power = zf_power_from_channel(h, inst.spec);

  ComplexMatrix cand;
  const auto eval_angle = [&](std::size_t n, double angle) {
    cand = h;
    apply_element_delta(inst, cand, n,
                        std::polar(1.0, angle) - std::polar(1.0, out.theta[n]));
    return zf_power_from_channel(cand, inst.spec);
  };

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    const double start = power;
    for (std::size_t n = 0; n < n_el; ++n) {
      double best_angle = out.theta[n];
      double best_power = power;
      const double step = kTwoPi / double(opts.grid);
      for (int gidx = 0; gidx < opts.grid; ++gidx) {
        const double angle = double(gidx) * step;
        const double p = eval_angle(n, angle);
        if (p < best_power) {
          best_power = p;
          best_angle = angle;
        }
      }
      // Golden-section polish around the best coarse angle.
      double lo = best_angle - step;
      double hi = best_angle + step;
      double m1 = hi - kGolden * (hi - lo);
      double m2 = lo + kGolden * (hi - lo);
      double p1 = eval_angle(n, m1);
      double p2 = eval_angle(n, m2);
      for (int it = 0; it < opts.polish_iters; ++it) {
        if (p1 < p2) {
          hi = m2;
          m2 = m1;
          p2 = p1;
          m1 = hi - kGolden * (hi - lo);
          p1 = eval_angle(n, m1);
        } else {
          lo = m1;
          m1 = m2;
          p1 = p2;
          m2 = lo + kGolden * (hi - lo);
          p2 = eval_angle(n, m2);
        }
        const double pm = std::min(p1, p2);
        if (pm < best_power) {
          best_power = pm;
          best_angle = p1 < p2 ? m1 : m2;
        }
      }
      if (best_power < power) {
        double wrapped = std::fmod(best_angle, kTwoPi);
        if (wrapped < 0.0) wrapped += kTwoPi;
        apply_element_delta(inst, h, n,
                            std::polar(1.0, wrapped) -
                                std::polar(1.0, out.theta[n]));
        out.theta[n] = wrapped;
        power = best_power;
      }
    }
    out.sweeps = sweep;
    if (std::isinf(power)) break;
    if (std::isinf(start)) continue;
    if ((start - power) / start < opts.threshold) {
      out.converged = true;
      break;
    }
  }
  out.total_power = power;
  return out;
}

SolveOutcome codebook_select(const MultiuserInstance& inst,
                             const std::vector<PhaseVector>& codebook,
                             PrecoderKind kind) {
  assert(!codebook.empty());
  InnerPower inner(inst.spec, kind);

  SolveOutcome out;
  out.theta = codebook.front();
  for (const PhaseVector& cw : codebook) {
    const ComplexMatrix h = channel::combined_matrix(inst.channels, cw);
    const double p = inner(h);
    if (p < out.total_power) {
      out.total_power = p;
      out.theta = cw;
    }
    out.trace.push_back(out.total_power);
  }
  out.iterations = int(codebook.size());
  out.converged = true;
  if (std::isinf(out.total_power)) {
    out.status = OutcomeStatus::all_infeasible;
    return out;
  }
  out.precoder = final_precoder(inst, out.theta, kind);
  return out;
}

}  // namespace irsim::mu_phase
