#pragma once

#include <optional>
#include <vector>

#include "irsim/linalg.hpp"

// Transmit precoders for fixed phase shifts. MRT is closed form; ZF uses the
// channel pseudo-inverse with the SINR constraints tight; the MMSE precoder
// comes from the uplink-downlink duality fixed point and is the optimal
// solution of the per-theta power minimization. Infeasibility is reported as
// a value, not an exception.

namespace irsim::precoding {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::cplx;

struct SinrSpec {
  std::vector<double> targets;       // gamma_k, linear
  std::vector<double> noise_powers;  // sigma^2_k, watts

  std::size_t n_users() const { return targets.size(); }
  static SinrSpec uniform(std::size_t k, double gamma, double sigma2) {
    return {std::vector<double>(k, gamma), std::vector<double>(k, sigma2)};
  }
};

struct Precoder {
  ComplexMatrix w;      // M x K, column k serves user k (sqrt-watts)
  double total_power;   // sum_k ||w_k||^2, watts
};

enum class SolveStatus {
  ok,
  zero_channel,
  rank_deficient,
  infeasible,
  not_converged,
};

struct PrecoderResult {
  SolveStatus status = SolveStatus::ok;
  std::optional<Precoder> precoder;
  int iterations = 0;
  std::vector<double> lambda;  // MMSE dual variables at convergence

  bool ok() const { return status == SolveStatus::ok; }
};

/// SINR_k = |h_k^H w_k|^2 / (sum_{j != k} |h_k^H w_j|^2 + sigma^2_k).
std::vector<double> sinr(const std::vector<ComplexVector>& h,
                         const Precoder& w, const SinrSpec& spec);

/// Single-user MRT: w = sqrt(P) h/||h||, P = gamma sigma^2 / ||h||^2.
PrecoderResult mrt(const ComplexVector& h, double gamma, double sigma2);

/// Zero-forcing with tight per-user powers p_k = sigma^2_k gamma_k.
PrecoderResult zf(const std::vector<ComplexVector>& h, const SinrSpec& spec);

struct MmseOptions {
  double tol = 1e-10;
  int max_iter = 500;
  // Optional warm start for the dual fixed point.
  std::vector<double> lambda0;
};

/// Optimal downlink precoder via the dual fixed point.
PrecoderResult mmse(const std::vector<ComplexVector>& h, const SinrSpec& spec,
                    const MmseOptions& opts = {});

}  // namespace irsim::precoding
