#include "irsim/channel.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "irsim/kernels.hpp"
#include "irsim/rng.hpp"

namespace irsim::channel {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Streams within one (seed, trial): G, then per user h_d, h_r.
constexpr std::uint64_t kStreamG = 0;
std::uint64_t stream_hd(std::size_t k) { return 1 + 2 * k; }
std::uint64_t stream_hr(std::size_t k) { return 2 + 2 * k; }

Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double length(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 unit(const Vec3& v) {
  const double l = length(v);
  return {v.x / l, v.y / l, v.z / l};
}

// Element offsets in wavelengths relative to the reference element.
Vec3 ap_offset(const Geometry& g, std::size_t m) {
  return {double(m) * g.element_spacing, 0.0, 0.0};
}

Vec3 irs_offset(const Geometry& g, std::size_t n) {
  return {0.0, double(n % g.n_y) * g.element_spacing,
          double(n / g.n_y) * g.element_spacing};
}

cplx steer(const Vec3& dir, const Vec3& offset_wl) {
  return std::polar(1.0, kTwoPi * dot(dir, offset_wl));
}

// sqrt(pathloss) * ( sqrt(beta/(1+beta)) los + sqrt(1/(1+beta)) nlos )
cplx mix_entry(double amp, double los_w, double nlos_w, cplx los, cplx nlos) {
  return amp * (los_w * los + nlos_w * nlos);
}

struct RicianWeights {
  double los;
  double nlos;
};

RicianWeights weights(double beta) {
  if (std::isinf(beta)) return {1.0, 0.0};
  return {std::sqrt(beta / (1.0 + beta)), std::sqrt(1.0 / (1.0 + beta))};
}

}  // namespace

double PhaseVector::phase(std::size_t n) const {
  return double(levels[n]) * (kTwoPi / double(n_levels()));
}

std::vector<double> level_phases(int bits) {
  const int levels = 1 << bits;
  std::vector<double> out(levels);
  for (int l = 0; l < levels; ++l) out[l] = double(l) * (kTwoPi / double(levels));
  return out;
}

std::vector<cplx> level_units(int bits) {
  const int levels = 1 << bits;
  std::vector<cplx> out(levels);
  if (bits == 1) {
    out = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
  } else if (bits == 2) {
    out = {cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(-1.0, 0.0), cplx(0.0, -1.0)};
  } else {
    for (int l = 0; l < levels; ++l)
      out[l] = std::polar(1.0, double(l) * (kTwoPi / double(levels)));
  }
  return out;
}

double path_loss_linear(double distance_m, const LinkParams& p) {
  assert(distance_m > 0.0);
  const double c0 = db_to_linear(p.reference_loss_db);
  const double gain = db_to_linear(p.antenna_gain_dbi);
  return c0 * std::pow(distance_m, -p.path_loss_exponent) * gain;
}

ChannelRealization generate(const Geometry& geom, const LinkSet& links,
                            std::uint64_t seed, std::uint64_t trial) {
  const std::size_t m_ant = geom.m_antennas;
  const std::size_t n_el = geom.n_elements();
  const std::size_t users = geom.n_users();

  ChannelRealization ch;
  ch.g = ComplexMatrix(n_el, m_ant);
  ch.h_d.resize(users);
  ch.h_r.resize(users);

  // AP -> IRS
  {
    const Vec3 d = sub(geom.irs_ref, geom.ap_ref);
    const double amp = std::sqrt(path_loss_linear(length(d), links.ap_irs));
    const Vec3 u = unit(d);
    const RicianWeights w = weights(links.ap_irs.rician_factor);
    Rng rng = Rng::substream(seed, trial, kStreamG);
    for (std::size_t n = 0; n < n_el; ++n) {
      const cplx rx = steer(u, irs_offset(geom, n));
      for (std::size_t m = 0; m < m_ant; ++m) {
        const cplx los = rx * steer(u, ap_offset(geom, m));
        const cplx nlos = w.nlos > 0.0 ? rng.cnormal() : cplx(0.0, 0.0);
        ch.g(n, m) = mix_entry(amp, w.los, w.nlos, los, nlos);
      }
    }
  }

  for (std::size_t k = 0; k < users; ++k) {
    // AP -> user k
    {
      const Vec3 d = sub(geom.user_positions[k], geom.ap_ref);
      const double amp = std::sqrt(path_loss_linear(length(d), links.ap_user));
      const Vec3 u = unit(d);
      const RicianWeights w = weights(links.ap_user.rician_factor);
      Rng rng = Rng::substream(seed, trial, stream_hd(k));
      ch.h_d[k].resize(m_ant);
      for (std::size_t m = 0; m < m_ant; ++m) {
        const cplx los = steer(u, ap_offset(geom, m));
        const cplx nlos = w.nlos > 0.0 ? rng.cnormal() : cplx(0.0, 0.0);
        ch.h_d[k][m] = mix_entry(amp, w.los, w.nlos, los, nlos);
      }
    }
    // IRS -> user k
    {
      const Vec3 d = sub(geom.user_positions[k], geom.irs_ref);
      const double amp = std::sqrt(path_loss_linear(length(d), links.irs_user));
      const Vec3 u = unit(d);
      const RicianWeights w = weights(links.irs_user.rician_factor);
      Rng rng = Rng::substream(seed, trial, stream_hr(k));
      ch.h_r[k].resize(n_el);
      for (std::size_t n = 0; n < n_el; ++n) {
        const cplx los = steer(u, irs_offset(geom, n));
        const cplx nlos = w.nlos > 0.0 ? rng.cnormal() : cplx(0.0, 0.0);
        ch.h_r[k][n] = mix_entry(amp, w.los, w.nlos, los, nlos);
      }
    }
  }
  return ch;
}

ComplexVector combined_channel(const ChannelRealization& ch,
                               const PhaseVector& theta, std::size_t user) {
  const std::size_t m_ant = ch.g.cols();
  const std::size_t n_el = ch.g.rows();
  assert(theta.size() == n_el);
  const std::vector<cplx> units = level_units(theta.bits);

  // Row h^H accumulated first, then conjugated into the column h.
  ComplexVector row(m_ant);
  for (std::size_t m = 0; m < m_ant; ++m) row[m] = std::conj(ch.h_d[user][m]);
  for (std::size_t n = 0; n < n_el; ++n) {
    const cplx coeff = std::conj(ch.h_r[user][n]) * units[theta.levels[n]];
    kernels::axpy(coeff, ch.g.row(n), row);
  }
  for (cplx& v : row) v = std::conj(v);
  return row;
}

ComplexMatrix combined_matrix(const ChannelRealization& ch,
                              const PhaseVector& theta) {
  const std::size_t m_ant = ch.g.cols();
  const std::size_t users = ch.h_d.size();
  ComplexMatrix h(m_ant, users);
  for (std::size_t k = 0; k < users; ++k) {
    const ComplexVector hk = combined_channel(ch, theta, k);
    for (std::size_t m = 0; m < m_ant; ++m) h(m, k) = hk[m];
  }
  return h;
}

ComplexMatrix combined_matrix_continuous(const ChannelRealization& ch,
                                         std::span<const double> phases) {
  const std::size_t m_ant = ch.g.cols();
  const std::size_t n_el = ch.g.rows();
  const std::size_t users = ch.h_d.size();
  assert(phases.size() == n_el);
  std::vector<cplx> units(n_el);
  for (std::size_t n = 0; n < n_el; ++n) units[n] = std::polar(1.0, phases[n]);

  ComplexMatrix h(m_ant, users);
  ComplexVector row(m_ant);
  for (std::size_t k = 0; k < users; ++k) {
    for (std::size_t m = 0; m < m_ant; ++m) row[m] = std::conj(ch.h_d[k][m]);
    for (std::size_t n = 0; n < n_el; ++n) {
      const cplx coeff = std::conj(ch.h_r[k][n]) * units[n];
      kernels::axpy(coeff, ch.g.row(n), row);
    }
    for (std::size_t m = 0; m < m_ant; ++m) h(m, k) = std::conj(row[m]);
  }
  return h;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace irsim::channel
