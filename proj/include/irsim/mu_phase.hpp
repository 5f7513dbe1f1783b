#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "irsim/channel.hpp"
#include "irsim/errors.hpp"
#include "irsim/precoding.hpp"

// Multiuser joint optimization: per-element one-dimensional search over the
// discrete levels with a ZF or MMSE inner precoder, exhaustive search over
// all phase assignments, and the Hadamard codebook baseline. Infeasible or
// rank-deficient candidates evaluate to +infinity.

namespace irsim::mu_phase {

using channel::ChannelRealization;
using channel::PhaseVector;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::cplx;
using precoding::SinrSpec;

struct MultiuserInstance {
  ChannelRealization channels;
  SinrSpec spec;
  int bits = 1;

  std::size_t n_users() const { return spec.n_users(); }
  std::size_t n_elements() const { return channels.g.rows(); }
  std::size_t m_antennas() const { return channels.g.cols(); }
};

enum class PrecoderKind { zf, mmse };

enum class OutcomeStatus { ok, all_infeasible, budget_exceeded };

constexpr double kInfinitePower = std::numeric_limits<double>::infinity();

struct SolveOutcome {
  OutcomeStatus status = OutcomeStatus::ok;
  double total_power = kInfinitePower;  // watts
  PhaseVector theta;
  std::optional<precoding::Precoder> precoder;  // absent when infinite
  int iterations = 0;                // sweeps, or candidates evaluated
  std::vector<double> trace;         // watts, per element update
  bool converged = false;

  bool feasible() const { return status == OutcomeStatus::ok; }
};

/// tr(P (H^H H)^{-1}) at the given phases; +infinity on rank deficiency.
double zf_power(const MultiuserInstance& inst, const PhaseVector& theta);

/// Same from an already-formed combined channel matrix (columns h_k).
double zf_power_from_channel(const ComplexMatrix& h, const SinrSpec& spec);

struct SweepOptions {
  double threshold = 1e-4;
  int max_sweeps = 100;
};

SolveOutcome zf_refinement(const MultiuserInstance& inst,
                           const PhaseVector& theta0,
                           const SweepOptions& opts = {});

SolveOutcome mmse_refinement(const MultiuserInstance& inst,
                             const PhaseVector& theta0,
                             const SweepOptions& opts = {});

/// Minimum-power phase assignment over all L^N candidates. Throws
/// BudgetExceeded when L^N > 2^20 unless forced.
SolveOutcome exhaustive_optimal(const MultiuserInstance& inst,
                                PrecoderKind kind, bool force = false);

/// Sylvester-construction Hadamard codewords, entries +-1 mapped to phases
/// {0, pi}. Throws UnsupportedOrder when n is not a power of two.
std::vector<PhaseVector> hadamard_codebook(std::size_t n);

/// Seeded random +-1 codebook of n codewords, the documented fallback for
/// orders with no Hadamard construction.
std::vector<PhaseVector> random_pm1_codebook(std::size_t n, std::uint64_t seed);

SolveOutcome codebook_select(const MultiuserInstance& inst,
                             const std::vector<PhaseVector>& codebook,
                             PrecoderKind kind);

struct ContinuousOutcome {
  std::vector<double> theta;  // radians
  double total_power = kInfinitePower;
  int sweeps = 0;
  bool converged = false;
};

struct ContinuousOptions {
  double threshold = 1e-4;
  int max_sweeps = 100;
  int grid = 32;         // coarse angles per element update
  int polish_iters = 8;  // golden-section steps around the best grid angle
};

/// Continuous-update analogue of zf_refinement: per element, a coarse grid
/// search over [0, 2 pi) polished by golden section. Source of the
/// quantization baseline in the multiuser harness.
ContinuousOutcome continuous_zf_refinement(const MultiuserInstance& inst,
                                           const std::vector<double>& theta0,
                                           const ContinuousOptions& opts = {});

}  // namespace irsim::mu_phase
