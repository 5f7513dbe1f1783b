#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "irsim/channel.hpp"
#include "irsim/errors.hpp"
#include "irsim/linalg.hpp"

// Single-user discrete phase optimization. The combined channel gain is a
// quadratic form in the unit-modulus phase vector; it is maximized exactly by
// depth-first branch-and-bound over the discrete levels and approximately by
// per-element successive refinement. The SOS1 integer-linear encoding of the
// same objective is built explicitly for consistency checks; the optimal
// solver branches on phase levels directly, which is an equivalent
// formulation that needs no external solver.

namespace irsim::su_phase {

using channel::PhaseVector;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::cplx;

using irsim::BudgetExceeded;

/// Objective data of the channel-gain maximization: gain(theta) =
/// v^H a v + 2 Re{v^H h_hat} + constant with v^H = (e^{j theta_1}, ...).
struct QuadraticForm {
  ComplexMatrix a;        // N x N hermitian PSD, Phi Phi^H
  ComplexVector h_hat;    // Phi h_d
  double constant = 0.0;  // ||h_d||^2
  // Retained factors so tests can check the quadratic form against the
  // direct norm ||v^H Phi + h_d^H||^2.
  ComplexMatrix phi;      // diag(h_r^H) G
  ComplexVector h_d;

  std::size_t size() const { return h_hat.size(); }
};

QuadraticForm build_quadratic(const ComplexMatrix& g, const ComplexVector& h_r,
                              const ComplexVector& h_d);

/// Channel power gain at a discrete phase assignment.
double objective(const QuadraticForm& q, const PhaseVector& theta);

/// Same for continuous phases (radians).
double objective(const QuadraticForm& q, std::span<const double> phases);

/// One coordinate update: theta_n <- argmax_{theta in F} Re{e^{j theta}
/// zeta_n}, ties to the lowest level; unchanged when zeta_n == 0.
PhaseVector refine_element(const QuadraticForm& q, const PhaseVector& theta,
                           std::size_t n);

struct RefineOutcome {
  PhaseVector theta;
  double objective = 0.0;
  std::vector<double> trace;  // gain after every element update
  int sweeps = 0;
  bool converged = false;
};

struct RefineOptions {
  double threshold = 1e-4;
  int max_sweeps = 100;
};

/// Coordinate ascent over elements 1..N repeatedly; stops when the
/// fractional gain increase over a full sweep drops below the threshold.
RefineOutcome successive_refinement(const QuadraticForm& q,
                                    const PhaseVector& theta0,
                                    const RefineOptions& opts = {});

struct ContinuousOutcome {
  std::vector<double> theta;  // radians in [0, 2 pi)
  double objective = 0.0;
  std::vector<double> trace;
  int sweeps = 0;
  bool converged = false;
};

/// Coordinate ascent with the unconstrained per-element maximizer.
ContinuousOutcome continuous_refinement(const QuadraticForm& q,
                                        std::span<const double> theta0,
                                        const RefineOptions& opts = {});

/// Nearest discrete level per element (circular distance, downward ties).
PhaseVector quantize(std::span<const double> phases, int bits);

struct OptimalOutcome {
  PhaseVector theta;
  double objective = 0.0;
  std::uint64_t nodes = 0;
  bool proved_optimal = false;
};

struct OptimalOptions {
  std::uint64_t node_budget = 1'000'000;
  bool force = false;  // lifts the N*bits <= 30 guard
};

/// Global maximizer over F^N by branch-and-bound (admissible bound, children
/// ordered by the per-element preference, incumbent from refinement).
/// Throws BudgetExceeded if N*bits > 30 and force is not set; returns the
/// incumbent with proved_optimal=false when the node budget runs out.
OptimalOutcome solve_optimal(const QuadraticForm& q, int bits,
                             const OptimalOptions& opts = {});

/// Explicit SOS1 linearization of the gain objective (constants dropped).
struct IlpModel {
  int bits = 1;
  std::size_t n = 0;
  std::vector<double> level_angle;  // a
  std::vector<double> level_cos;    // c
  std::vector<double> level_sin;    // s
  std::vector<std::vector<double>> x_coef;  // per element, per level
  // y_coef[pair_index(i,n)][level], pairs i < n in row-major order
  std::vector<std::vector<double>> y_coef;
  double dropped_constant = 0.0;  // sum_n a(n,n) + ||h_d||^2

  std::size_t pair_index(std::size_t i, std::size_t n) const;
};

IlpModel build_ilp(const QuadraticForm& q, int bits);

/// Linear objective value at the SOS1 encoding of a level assignment.
double ilp_objective(const IlpModel& m, const PhaseVector& theta);

/// Residual of the wrap coupling a^T(x_i - x_n) + 2 pi eps = a^T y_{i,n},
/// maximized over all pairs.
double ilp_coupling_residual(const IlpModel& m, const PhaseVector& theta);

}  // namespace irsim::su_phase
