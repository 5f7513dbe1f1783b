#include "irsim/precoding.hpp"

#include <cassert>
#include <cmath>

#include "irsim/kernels.hpp"

namespace irsim::precoding {

namespace {

double abs_sq(cplx v) { return v.real() * v.real() + v.imag() * v.imag(); }

double column_power(const ComplexMatrix& w, std::size_t k) {
  double s = 0.0;
  for (std::size_t m = 0; m < w.rows(); ++m) s += abs_sq(w(m, k));
  return s;
}

double total_power(const ComplexMatrix& w) {
  double s = 0.0;
  for (std::size_t k = 0; k < w.cols(); ++k) s += column_power(w, k);
  return s;
}

}  // namespace

std::vector<double> sinr(const std::vector<ComplexVector>& h,
                         const Precoder& w, const SinrSpec& spec) {
  const std::size_t users = h.size();
  assert(w.w.cols() == users && spec.n_users() == users);
  ComplexVector wk(w.w.rows());
  std::vector<double> out(users);
  for (std::size_t k = 0; k < users; ++k) {
    double signal = 0.0;
    double interference = 0.0;
    for (std::size_t j = 0; j < users; ++j) {
      for (std::size_t m = 0; m < w.w.rows(); ++m) wk[m] = w.w(m, j);
      const double p = abs_sq(kernels::cdotc(h[k], wk));
      if (j == k) {
        signal = p;
      } else {
        interference += p;
      }
    }
    out[k] = signal / (interference + spec.noise_powers[k]);
  }
  return out;
}

PrecoderResult mrt(const ComplexVector& h, double gamma, double sigma2) {
  const double gain = kernels::norm_sq(h);
  if (gain == 0.0) return {SolveStatus::zero_channel, std::nullopt, 0, {}};
  const double power = gamma * sigma2 / gain;
  const double scale = std::sqrt(power / gain);
  ComplexMatrix w(h.size(), 1);
  for (std::size_t m = 0; m < h.size(); ++m) w(m, 0) = scale * h[m];
  return {SolveStatus::ok, Precoder{std::move(w), power}, 1, {}};
}

PrecoderResult zf(const std::vector<ComplexVector>& h, const SinrSpec& spec) {
  const std::size_t users = h.size();
  const std::size_t m_ant = h[0].size();
  assert(m_ant >= users);

  ComplexMatrix hm(m_ant, users);
  for (std::size_t k = 0; k < users; ++k)
    for (std::size_t m = 0; m < m_ant; ++m) hm(m, k) = h[k][m];

  ComplexMatrix pinv;  // K x M, (H^H H)^{-1} H^H
  try {
    pinv = linalg::pseudo_inverse_tall(hm);
  } catch (const linalg::RankDeficient&) {
    return {SolveStatus::rank_deficient, std::nullopt, 0, {}};
  }

  // W = H (H^H H)^{-1} P^{1/2} = pinv^H P^{1/2}
  ComplexMatrix w(m_ant, users);
  for (std::size_t k = 0; k < users; ++k) {
    const double amp = std::sqrt(spec.targets[k] * spec.noise_powers[k]);
    for (std::size_t m = 0; m < m_ant; ++m)
      w(m, k) = amp * std::conj(pinv(k, m));
  }
  const double power = total_power(w);
  return {SolveStatus::ok, Precoder{std::move(w), power}, 1, {}};
}

PrecoderResult mmse(const std::vector<ComplexVector>& h, const SinrSpec& spec,
                    const MmseOptions& opts) {
  const std::size_t users = h.size();
  const std::size_t m_ant = h[0].size();

  std::vector<double> gain(users);
  for (std::size_t k = 0; k < users; ++k) {
    gain[k] = kernels::norm_sq(h[k]);
    if (gain[k] == 0.0) return {SolveStatus::infeasible, std::nullopt, 0, {}};
  }

  std::vector<double> lambda(users);
  if (opts.lambda0.size() == users) {
    lambda = opts.lambda0;
  } else {
    for (std::size_t k = 0; k < users; ++k)
      lambda[k] = spec.targets[k] * spec.noise_powers[k] / gain[k];
  }

  // Fixed point of lambda_k = sigma^2_k / ((1 + 1/gamma_k) h_k^H B^{-1} h_k),
  // B = I + sum_i lambda_i / sigma^2_i h_i h_i^H. Plain substitution
  // contracts at rate ~ gamma/(1+gamma), which stalls at high targets, so
  // every two map steps an Aitken extrapolation removes the slow mode;
  // convergence is still judged on the change of a plain map application.
  ComplexMatrix bx;  // columns B^{-1} h_k
  int iters = 0;
  bool converged = false;
  bool failed = false;
  SolveStatus fail_status = SolveStatus::ok;

  const auto apply_map = [&](std::vector<double>& lam) -> bool {
    ++iters;
    ComplexMatrix b = ComplexMatrix::identity(m_ant);
    for (std::size_t i = 0; i < users; ++i) {
      const double c = lam[i] / spec.noise_powers[i];
      for (std::size_t r = 0; r < m_ant; ++r)
        for (std::size_t s = 0; s < m_ant; ++s)
          b(r, s) += c * h[i][r] * std::conj(h[i][s]);
    }
    ComplexMatrix rhs(m_ant, users);
    for (std::size_t k = 0; k < users; ++k)
      for (std::size_t m = 0; m < m_ant; ++m) rhs(m, k) = h[k][m];
    try {
      bx = linalg::solve_linear_multi(b, rhs);
    } catch (const linalg::SingularMatrix&) {
      failed = true;
      fail_status = SolveStatus::infeasible;
      return false;
    }
    double max_rel = 0.0;
    ComplexVector col(m_ant);
    for (std::size_t k = 0; k < users; ++k) {
      for (std::size_t m = 0; m < m_ant; ++m) col[m] = bx(m, k);
      const double quad = std::real(kernels::cdotc(h[k], col));
      if (!(quad > 0.0)) {
        failed = true;
        fail_status = SolveStatus::infeasible;
        return false;
      }
      const double next =
          spec.noise_powers[k] / ((1.0 + 1.0 / spec.targets[k]) * quad);
      max_rel =
          std::max(max_rel, std::abs(next - lam[k]) / std::max(next, 1e-300));
      lam[k] = next;
    }
    return max_rel < opts.tol;
  };

  std::vector<double> prev(users), mid(users);
  while (iters < opts.max_iter) {
    prev = lambda;
    if (apply_map(lambda) || failed) {
      converged = !failed;
      break;
    }
    if (iters >= opts.max_iter) break;
    mid = lambda;
    if (apply_map(lambda) || failed) {
      converged = !failed;
      break;
    }
    // Aitken delta-squared on each coordinate, kept only when safe.
    std::vector<double> accel(users);
    bool ok = true;
    for (std::size_t k = 0; k < users; ++k) {
      const double d1 = mid[k] - prev[k];
      const double d2 = lambda[k] - mid[k];
      const double denom = d2 - d1;
      if (denom == 0.0) {
        accel[k] = lambda[k];
        continue;
      }
      accel[k] = lambda[k] - d2 * d2 / denom;
      if (!std::isfinite(accel[k]) || accel[k] <= 0.0) ok = false;
    }
    if (ok) lambda = accel;
  }
  if (failed) return {fail_status, std::nullopt, iters, lambda};
  if (!converged)
    return {SolveStatus::not_converged, std::nullopt, iters, lambda};

  // Refresh B^{-1} h_k at the converged duals so directions, powers, and
  // lambda are mutually consistent.
  {
    ComplexMatrix b = ComplexMatrix::identity(m_ant);
    for (std::size_t i = 0; i < users; ++i) {
      const double c = lambda[i] / spec.noise_powers[i];
      for (std::size_t r = 0; r < m_ant; ++r)
        for (std::size_t s = 0; s < m_ant; ++s)
          b(r, s) += c * h[i][r] * std::conj(h[i][s]);
    }
    ComplexMatrix rhs(m_ant, users);
    for (std::size_t k = 0; k < users; ++k)
      for (std::size_t m = 0; m < m_ant; ++m) rhs(m, k) = h[k][m];
    try {
      bx = linalg::solve_linear_multi(b, rhs);
    } catch (const linalg::SingularMatrix&) {
      return {SolveStatus::infeasible, std::nullopt, iters, lambda};
    }
  }

  // Unit directions; h_k^H (B^{-1} h_k) is real positive, so no extra phase
  // normalization is needed.
  ComplexMatrix dirs(m_ant, users);
  ComplexVector col(m_ant);
  for (std::size_t k = 0; k < users; ++k) {
    for (std::size_t m = 0; m < m_ant; ++m) col[m] = bx(m, k);
    const double nrm = linalg::norm(col);
    for (std::size_t m = 0; m < m_ant; ++m) dirs(m, k) = col[m] / nrm;
  }

  // Power allocation p = Q^{-1} sigma^2.
  ComplexMatrix q(users, users);
  ComplexVector dk(m_ant);
  for (std::size_t i = 0; i < users; ++i) {
    for (std::size_t j = 0; j < users; ++j) {
      for (std::size_t m = 0; m < m_ant; ++m) dk[m] = dirs(m, j);
      const double g = abs_sq(kernels::cdotc(h[i], dk));
      q(i, j) = (i == j) ? g / spec.targets[i] : -g;
    }
  }
  ComplexVector sig(users);
  for (std::size_t k = 0; k < users; ++k) sig[k] = spec.noise_powers[k];
  ComplexVector p;
  try {
    p = linalg::solve_linear(q, sig);
  } catch (const linalg::SingularMatrix&) {
    return {SolveStatus::infeasible, std::nullopt, iters, lambda};
  }
  for (std::size_t k = 0; k < users; ++k) {
    if (!(p[k].real() > 0.0))
      return {SolveStatus::infeasible, std::nullopt, iters, lambda};
  }

  ComplexMatrix w(m_ant, users);
  for (std::size_t k = 0; k < users; ++k) {
    const double amp = std::sqrt(p[k].real());
    for (std::size_t m = 0; m < m_ant; ++m) w(m, k) = amp * dirs(m, k);
  }
  const double power = total_power(w);
  return {SolveStatus::ok, Precoder{std::move(w), power}, iters, lambda};
}

}  // namespace irsim::precoding
