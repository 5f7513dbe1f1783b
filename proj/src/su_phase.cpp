#include "irsim/su_phase.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <numeric>

#include "irsim/kernels.hpp"

namespace irsim::su_phase {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// v entries e^{-j theta_n} (the conjugate of the row v^H).
ComplexVector v_of(const PhaseVector& theta) {
  const std::vector<cplx> units = channel::level_units(theta.bits);
  ComplexVector v(theta.size());
  for (std::size_t n = 0; n < theta.size(); ++n)
    v[n] = std::conj(units[theta.levels[n]]);
  return v;
}

double gain_from_v(const QuadraticForm& q, const ComplexVector& v) {
  const ComplexVector av = linalg::matvec(q.a, v);
  const cplx quad = kernels::cdotc(v, av);
  cplx lin(0.0, 0.0);
  for (std::size_t n = 0; n < v.size(); ++n)
    lin += std::conj(v[n]) * q.h_hat[n];
  return quad.real() + 2.0 * lin.real() + q.constant;
}

// zeta_n = sum_{l != n} a(n,l) v_l + h_hat(n)
cplx zeta(const QuadraticForm& q, const ComplexVector& v, std::size_t n) {
  const cplx full = kernels::cdotu(q.a.row(n), v);
  return full - q.a(n, n) * v[n] + q.h_hat[n];
}

int best_level(const std::vector<cplx>& units, cplx z) {
  int best = 0;
  double best_score = (units[0] * z).real();
  for (std::size_t l = 1; l < units.size(); ++l) {
    const double score = (units[l] * z).real();
    if (score > best_score) {
      best_score = score;
      best = int(l);
    }
  }
  return best;
}

}  // namespace

QuadraticForm build_quadratic(const ComplexMatrix& g, const ComplexVector& h_r,
                              const ComplexVector& h_d) {
  const std::size_t n_el = g.rows();
  assert(h_r.size() == n_el && h_d.size() == g.cols());

  QuadraticForm q;
  q.phi = ComplexMatrix(n_el, g.cols());
  for (std::size_t n = 0; n < n_el; ++n) {
    const cplx c = std::conj(h_r[n]);
    for (std::size_t m = 0; m < g.cols(); ++m) q.phi(n, m) = c * g(n, m);
  }

  q.a = ComplexMatrix(n_el, n_el);
  for (std::size_t i = 0; i < n_el; ++i) {
    q.a(i, i) = kernels::norm_sq(q.phi.row(i));
    for (std::size_t n = i + 1; n < n_el; ++n) {
      const cplx v = kernels::cdotc(q.phi.row(n), q.phi.row(i));
      q.a(i, n) = v;
      q.a(n, i) = std::conj(v);
    }
  }

  q.h_hat.resize(n_el);
  for (std::size_t n = 0; n < n_el; ++n)
    q.h_hat[n] = kernels::cdotu(q.phi.row(n), h_d);
  q.constant = kernels::norm_sq(h_d);
  q.h_d = h_d;
  return q;
}

double objective(const QuadraticForm& q, const PhaseVector& theta) {
  assert(theta.size() == q.size());
  return gain_from_v(q, v_of(theta));
}

double objective(const QuadraticForm& q, std::span<const double> phases) {
  assert(phases.size() == q.size());
  ComplexVector v(phases.size());
  for (std::size_t n = 0; n < phases.size(); ++n)
    v[n] = std::polar(1.0, -phases[n]);
  return gain_from_v(q, v);
}

PhaseVector refine_element(const QuadraticForm& q, const PhaseVector& theta,
                           std::size_t n) {
  PhaseVector out = theta;
  const ComplexVector v = v_of(theta);
  const cplx z = zeta(q, v, n);
  if (z == cplx(0.0, 0.0)) return out;
  out.levels[n] = best_level(channel::level_units(theta.bits), z);
  return out;
}

RefineOutcome successive_refinement(const QuadraticForm& q,
                                    const PhaseVector& theta0,
                                    const RefineOptions& opts) {
  assert(opts.threshold > 0.0);
  const std::size_t n_el = q.size();
  const std::vector<cplx> units = channel::level_units(theta0.bits);

  RefineOutcome out;
  out.theta = theta0;
  ComplexVector v = v_of(theta0);
  double gain = gain_from_v(q, v);
  out.trace.push_back(gain);

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    const double start = gain;
    for (std::size_t n = 0; n < n_el; ++n) {
      const cplx z = zeta(q, v, n);
      if (z == cplx(0.0, 0.0)) {
        out.trace.push_back(gain);
        continue;
      }
      const int level = best_level(units, z);
      if (level != out.theta.levels[n]) {
        // best_score >= score_old, so the increment cannot round negative.
        const double score_old = (std::conj(v[n]) * z).real();
        const double best_score = (units[level] * z).real();
        out.theta.levels[n] = level;
        v[n] = std::conj(units[level]);
        gain += 2.0 * (best_score - score_old);
      }
      out.trace.push_back(gain);
    }
    out.sweeps = sweep;
    const double frac = (gain - start) / std::max(start, 1e-300);
    if (frac < opts.threshold) {
      out.converged = true;
      break;
    }
  }
  out.objective = objective(q, out.theta);
  return out;
}

ContinuousOutcome continuous_refinement(const QuadraticForm& q,
                                        std::span<const double> theta0,
                                        const RefineOptions& opts) {
  assert(opts.threshold > 0.0);
  const std::size_t n_el = q.size();

  ContinuousOutcome out;
  out.theta.assign(theta0.begin(), theta0.end());
  ComplexVector v(n_el);
  for (std::size_t n = 0; n < n_el; ++n) v[n] = std::polar(1.0, -out.theta[n]);
  double gain = gain_from_v(q, v);
  out.trace.push_back(gain);

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    const double start = gain;
    for (std::size_t n = 0; n < n_el; ++n) {
      const cplx z = zeta(q, v, n);
      const double mag = std::abs(z);
      if (mag == 0.0) {
        out.trace.push_back(gain);
        continue;
      }
      // theta_n <- phi_n aligns e^{j theta} zeta to the positive real axis.
      const cplx u_old = std::conj(v[n]);
      const double delta = std::max(0.0, 2.0 * (mag - (u_old * z).real()));
      double angle = -std::arg(z);
      if (angle < 0.0) angle += kTwoPi;
      out.theta[n] = angle;
      v[n] = z / mag;  // conj(e^{j theta_n})
      gain += delta;
      out.trace.push_back(gain);
    }
    out.sweeps = sweep;
    const double frac = (gain - start) / std::max(start, 1e-300);
    if (frac < opts.threshold) {
      out.converged = true;
      break;
    }
  }
  out.objective = objective(q, std::span<const double>(out.theta));
  return out;
}

PhaseVector quantize(std::span<const double> phases, int bits) {
  assert(bits >= 1);
  const std::vector<double> levels = channel::level_phases(bits);
  PhaseVector out{bits, std::vector<int>(phases.size(), 0)};
  for (std::size_t n = 0; n < phases.size(); ++n) {
    int best = 0;
    double best_dist = std::abs(std::remainder(phases[n] - levels[0], kTwoPi));
    for (std::size_t l = 1; l < levels.size(); ++l) {
      const double d = std::abs(std::remainder(phases[n] - levels[l], kTwoPi));
      if (d < best_dist) {
        best_dist = d;
        best = int(l);
      }
    }
    out.levels[n] = best;
  }
  return out;
}

namespace {

struct BnbState {
  const QuadraticForm* q;
  const std::vector<cplx>* units;
  int bits;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool budget_hit = false;
  double incumbent_obj;
  PhaseVector incumbent;
  PhaseVector current;
  ComplexVector u_fixed;            // e^{j theta_i} for decided elements
  std::vector<double> suffix_bound; // sum over n >= p of R_n
  double const_term;
};

void bnb_descend(BnbState& st, std::size_t depth, double exact_prefix) {
  if (st.budget_hit) return;
  ++st.nodes;
  if (st.nodes > st.budget) {
    st.budget_hit = true;
    return;
  }

  const std::size_t n_el = st.q->size();
  if (depth == n_el) {
    const double value = objective(*st.q, st.current);
    if (value > st.incumbent_obj) {
      st.incumbent_obj = value;
      st.incumbent = st.current;
    }
    return;
  }

  // Margin keeps rounding in the incremental prefix from pruning the true
  // optimum; leaves are re-scored with the canonical objective.
  const double margin = 1e-9 * std::abs(st.incumbent_obj);
  if (exact_prefix + st.suffix_bound[depth] + st.const_term <=
      st.incumbent_obj - margin) {
    return;
  }

  // zeta over the decided prefix orders the children greedily.
  cplx z = st.q->h_hat[depth];
  for (std::size_t i = 0; i < depth; ++i)
    z += st.q->a(depth, i) * std::conj(st.u_fixed[i]);

  const std::size_t n_levels = st.units->size();
  std::vector<std::pair<double, int>> order(n_levels);
  for (std::size_t l = 0; l < n_levels; ++l)
    order[l] = {((*st.units)[l] * z).real(), int(l)};
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  for (const auto& [score, level] : order) {
    st.current.levels[depth] = level;
    st.u_fixed[depth] = (*st.units)[level];
    bnb_descend(st, depth + 1, exact_prefix + 2.0 * score);
    if (st.budget_hit) return;
  }
}

}  // namespace

OptimalOutcome solve_optimal(const QuadraticForm& q, int bits,
                             const OptimalOptions& opts) {
  const std::size_t n_el = q.size();
  if (!opts.force && n_el * std::size_t(bits) > 30) {
    throw BudgetExceeded("solve_optimal: N*bits > 30; pass force to override");
  }

  const RefineOutcome warm =
      successive_refinement(q, PhaseVector::zeros(n_el, bits));

  BnbState st;
  const std::vector<cplx> units = channel::level_units(bits);
  st.q = &q;
  st.units = &units;
  st.bits = bits;
  st.budget = opts.node_budget;
  st.incumbent = warm.theta;
  st.incumbent_obj = warm.objective;
  st.current = PhaseVector::zeros(n_el, bits);
  st.u_fixed.assign(n_el, cplx(1.0, 0.0));

  // R_n = 2|h_hat(n)| + 2 sum_{i<n} |a(i,n)|: every undecided term's cosine
  // bounded by one.
  st.suffix_bound.assign(n_el + 1, 0.0);
  for (std::size_t n = n_el; n-- > 0;) {
    double r = 2.0 * std::abs(q.h_hat[n]);
    for (std::size_t i = 0; i < n; ++i) r += 2.0 * std::abs(q.a(i, n));
    st.suffix_bound[n] = st.suffix_bound[n + 1] + r;
  }
  st.const_term = q.constant;
  for (std::size_t n = 0; n < n_el; ++n) st.const_term += q.a(n, n).real();

  bnb_descend(st, 0, 0.0);

  OptimalOutcome out;
  out.theta = st.incumbent;
  out.objective = st.incumbent_obj;
  out.nodes = st.nodes;
  out.proved_optimal = !st.budget_hit;
  return out;
}

std::size_t IlpModel::pair_index(std::size_t i, std::size_t j) const {
  assert(i < j && j < n);
  // Row-major upper triangle without the diagonal.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

IlpModel build_ilp(const QuadraticForm& q, int bits) {
  IlpModel m;
  m.bits = bits;
  m.n = q.size();
  m.level_angle = channel::level_phases(bits);
  const std::vector<cplx> units = channel::level_units(bits);
  const std::size_t n_levels = units.size();
  m.level_cos.resize(n_levels);
  m.level_sin.resize(n_levels);
  for (std::size_t l = 0; l < n_levels; ++l) {
    m.level_cos[l] = units[l].real();
    m.level_sin[l] = units[l].imag();
  }

  m.x_coef.resize(m.n);
  for (std::size_t n = 0; n < m.n; ++n) {
    const double mag = std::abs(q.h_hat[n]);
    const double arg = std::arg(q.h_hat[n]);
    m.x_coef[n].resize(n_levels);
    for (std::size_t l = 0; l < n_levels; ++l)
      m.x_coef[n][l] = 2.0 * mag *
                       (std::cos(arg) * m.level_cos[l] -
                        std::sin(arg) * m.level_sin[l]);
  }

  m.y_coef.resize(m.n * (m.n - 1) / 2);
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = i + 1; j < m.n; ++j) {
      const double mag = std::abs(q.a(i, j));
      const double arg = std::arg(q.a(i, j));
      std::vector<double>& coef = m.y_coef[m.pair_index(i, j)];
      coef.resize(n_levels);
      for (std::size_t l = 0; l < n_levels; ++l)
        coef[l] = 2.0 * mag *
                  (std::cos(arg) * m.level_cos[l] -
                   std::sin(arg) * m.level_sin[l]);
    }
  }

  m.dropped_constant = q.constant;
  for (std::size_t n = 0; n < m.n; ++n)
    m.dropped_constant += q.a(n, n).real();
  return m;
}

double ilp_objective(const IlpModel& m, const PhaseVector& theta) {
  assert(theta.size() == m.n && theta.bits == m.bits);
  const int n_levels = 1 << m.bits;
  double obj = 0.0;
  for (std::size_t n = 0; n < m.n; ++n) obj += m.x_coef[n][theta.levels[n]];
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = i + 1; j < m.n; ++j) {
      const int diff =
          (theta.levels[i] - theta.levels[j] + n_levels) % n_levels;
      obj += m.y_coef[m.pair_index(i, j)][diff];
    }
  }
  return obj;
}

double ilp_coupling_residual(const IlpModel& m, const PhaseVector& theta) {
  const int n_levels = 1 << m.bits;
  double worst = 0.0;
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = i + 1; j < m.n; ++j) {
      const int li = theta.levels[i];
      const int lj = theta.levels[j];
      const double eps = li < lj ? 1.0 : 0.0;
      const int diff = (li - lj + n_levels) % n_levels;
      const double lhs =
          m.level_angle[li] - m.level_angle[lj] + kTwoPi * eps;
      worst = std::max(worst, std::abs(lhs - m.level_angle[diff]));
    }
  }
  return worst;
}

}  // namespace irsim::su_phase
