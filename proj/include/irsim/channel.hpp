#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "irsim/linalg.hpp"

// Channel generation over the 3D AP/IRS/user geometry: distance-dependent
// path loss times Rician small-scale fading, with a planar-wave array
// response as the LoS component. All powers are in watts internally; dB and
// dBm appear only at I/O boundaries.

namespace irsim::channel {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::cplx;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct Geometry {
  std::size_t m_antennas = 1;           // M, ULA along the x-axis
  std::size_t n_y = 4;                  // IRS elements along y
  std::size_t n_z = 1;                  // IRS elements along z
  Vec3 ap_ref{2.0, 0.0, 0.0};
  Vec3 irs_ref{0.0, 50.0, 0.0};
  std::vector<Vec3> user_positions;
  double element_spacing = 0.5;         // wavelengths

  std::size_t n_elements() const { return n_y * n_z; }
  std::size_t n_users() const { return user_positions.size(); }
};

struct LinkParams {
  double path_loss_exponent = 2.0;      // alpha
  double rician_factor = 0.0;           // beta; infinity = pure LoS
  double reference_loss_db = -30.0;     // C0 at d0 = 1 m
  double antenna_gain_dbi = 0.0;        // applied once per link
};

struct ChannelRealization {
  ComplexMatrix g;                      // N x M, AP->IRS
  std::vector<ComplexVector> h_d;       // K vectors of length M, AP->user
  std::vector<ComplexVector> h_r;       // K vectors of length N, IRS->user
};

/// N discrete phase shifts, each an index into the 2^bits uniform levels.
struct PhaseVector {
  int bits = 1;
  std::vector<int> levels;

  std::size_t size() const { return levels.size(); }
  int n_levels() const { return 1 << bits; }
  double phase(std::size_t n) const;
  static PhaseVector zeros(std::size_t n, int bits) {
    return PhaseVector{bits, std::vector<int>(n, 0)};
  }
};

/// Level angles {0, dtheta, ..., (L-1) dtheta}, dtheta = 2 pi / 2^bits.
std::vector<double> level_phases(int bits);

/// e^{j theta} for every level; exact +-1, +-i for bits <= 2.
std::vector<cplx> level_units(int bits);

/// C0 * (d/d0)^-alpha * 10^(gain/10), d0 = 1 m.
double path_loss_linear(double distance_m, const LinkParams& p);

struct LinkSet {
  LinkParams ap_irs;
  LinkParams ap_user;
  LinkParams irs_user;
};

/// Draws one realization; deterministic in (seed, trial) and independent of
/// any other trial's draws.
ChannelRealization generate(const Geometry& geom, const LinkSet& links,
                            std::uint64_t seed, std::uint64_t trial);

/// h_k with h_k^H = h_{r,k}^H Theta G + h_{d,k}^H.
ComplexVector combined_channel(const ChannelRealization& ch,
                               const PhaseVector& theta, std::size_t user);

/// All K combined channels as the columns of an M x K matrix.
ComplexMatrix combined_matrix(const ChannelRealization& ch,
                              const PhaseVector& theta);

/// Same for continuous phases in radians.
ComplexMatrix combined_matrix_continuous(const ChannelRealization& ch,
                                         std::span<const double> phases);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace irsim::channel
