#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "irsim/kernels.hpp"
#include "irsim/rng.hpp"
#include "irsim/su_phase.hpp"

using irsim::Rng;
using irsim::kernels::cplx;
using irsim::kernels::KernelTable;

namespace {

std::vector<cplx> random_vec(Rng& rng, std::size_t n) {
  std::vector<cplx> v(n);
  for (cplx& z : v) z = {rng.normal(), rng.normal()};
  return v;
}

// Naive long-double references.
cplx ref_cdotu(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  long double re = 0, im = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = std::complex<long double>(x[i]) *
                   std::complex<long double>(y[i]);
    re += p.real();
    im += p.imag();
  }
  return {double(re), double(im)};
}

const std::vector<std::size_t> kLengths = {0, 1, 2, 3, 4, 5, 7, 8,
                                           13, 16, 31, 64, 257, 1000};

}  // namespace

TEST_CASE("scalar and avx2 tables are bit-identical") {
  const KernelTable& scalar = irsim::kernels::scalar_table();
  const KernelTable* avx2 = irsim::kernels::avx2_table();
  if (!avx2) {
    MESSAGE("avx2 unavailable; equivalence trivially holds");
    return;
  }
  Rng rng(42);
  for (std::size_t n : kLengths) {
    const std::vector<cplx> x = random_vec(rng, n);
    const std::vector<cplx> y = random_vec(rng, n);

    const cplx du_s = scalar.cdotu(x.data(), y.data(), n);
    const cplx du_v = avx2->cdotu(x.data(), y.data(), n);
    CHECK(du_s.real() == du_v.real());
    CHECK(du_s.imag() == du_v.imag());

    const cplx dc_s = scalar.cdotc(x.data(), y.data(), n);
    const cplx dc_v = avx2->cdotc(x.data(), y.data(), n);
    CHECK(dc_s.real() == dc_v.real());
    CHECK(dc_s.imag() == dc_v.imag());

    CHECK(scalar.norm_sq(x.data(), n) == avx2->norm_sq(x.data(), n));
    CHECK(scalar.abs_sum(x.data(), n) == avx2->abs_sum(x.data(), n));

    const cplx r1_s = scalar.rotate_sum_b1(x.data(), n);
    const cplx r1_v = avx2->rotate_sum_b1(x.data(), n);
    CHECK(r1_s.real() == r1_v.real());
    CHECK(r1_s.imag() == r1_v.imag());

    const cplx r2_s = scalar.rotate_sum_b2(x.data(), n);
    const cplx r2_v = avx2->rotate_sum_b2(x.data(), n);
    CHECK(r2_s.real() == r2_v.real());
    CHECK(r2_s.imag() == r2_v.imag());

    std::vector<cplx> ys = y, yv = y;
    const cplx a{0.7, -1.3};
    scalar.axpy(a, x.data(), ys.data(), n);
    avx2->axpy(a, x.data(), yv.data(), n);
    std::vector<cplx> os(n), ov(n);
    scalar.cmul_conj(x.data(), y.data(), os.data(), n);
    avx2->cmul_conj(x.data(), y.data(), ov.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(ys[i] == yv[i]);
      CHECK(os[i] == ov[i]);
    }
  }
}

TEST_CASE("kernels match naive references") {
  for (auto backend : {irsim::kernels::Backend::scalar,
                       irsim::kernels::Backend::avx2}) {
    if (!irsim::kernels::select(backend)) continue;
    Rng rng(7);
    for (std::size_t n : kLengths) {
      const std::vector<cplx> x = random_vec(rng, n);
      const std::vector<cplx> y = random_vec(rng, n);

      const cplx du = irsim::kernels::cdotu(x, y);
      const cplx du_ref = ref_cdotu(x, y);
      CHECK(std::abs(du - du_ref) <= 1e-12 * (1.0 + std::abs(du_ref)));

      std::vector<cplx> xc(n);
      for (std::size_t i = 0; i < n; ++i) xc[i] = std::conj(x[i]);
      const cplx dc = irsim::kernels::cdotc(x, y);
      const cplx dc_ref = ref_cdotu(xc, y);
      CHECK(std::abs(dc - dc_ref) <= 1e-12 * (1.0 + std::abs(dc_ref)));

      long double nsq = 0, asum = 0;
      for (const cplx& z : x) {
        nsq += std::norm(std::complex<long double>(z));
        asum += std::abs(std::complex<long double>(z));
      }
      CHECK(irsim::kernels::norm_sq(x) ==
            doctest::Approx(double(nsq)).epsilon(1e-13));
      CHECK(irsim::kernels::abs_sum(x) ==
            doctest::Approx(double(asum)).epsilon(1e-13));
    }
  }
  irsim::kernels::select(irsim::kernels::Backend::scalar);
}

TEST_CASE("rotate_sum kernels agree with the quantize operation") {
  // The comparison-based level selection inside rotate_sum_b1/b2 must pick
  // the same level as quantizing the continuous optimum -arg(z).
  Rng rng(11);
  const std::size_t n = 100000;
  const std::vector<cplx> z = random_vec(rng, n);

  for (int bits : {1, 2}) {
    std::vector<double> target(n);
    for (std::size_t i = 0; i < n; ++i) target[i] = -std::arg(z[i]);
    const irsim::channel::PhaseVector theta =
        irsim::su_phase::quantize(target, bits);
    const std::vector<cplx> units = irsim::channel::level_units(bits);
    cplx expected(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      expected += z[i] * units[theta.levels[i]];

    const cplx got = bits == 1 ? irsim::kernels::rotate_sum_b1(z)
                               : irsim::kernels::rotate_sum_b2(z);
    CHECK(std::abs(got - expected) <= 1e-9 * std::abs(expected));
  }
}

TEST_CASE("rotate_sum_b1 boundary ties go to level zero") {
  // Re(z) == 0 ties the two levels; the lower one keeps z unchanged.
  const std::vector<cplx> z = {{0.0, 2.0}, {0.0, -3.0}, {-1.0, 0.5}};
  const cplx s = irsim::kernels::rotate_sum_b1(z);
  CHECK(s.real() == doctest::Approx(1.0));
  CHECK(s.imag() == doctest::Approx(-1.5));
}

TEST_CASE("rotate_sum_b2 picks the quadrant-aligned rotation") {
  const double quarter = std::numbers::pi / 2.0;
  for (double ang : {0.1, 0.9, 2.0, 3.0, 4.0, 5.5}) {
    const std::vector<cplx> z = {std::polar(1.0, ang)};
    const cplx w = irsim::kernels::rotate_sum_b2(z);
    // Rotated into |arg| <= pi/4.
    CHECK(std::abs(std::arg(w)) <= quarter / 2.0 + 1e-12);
    CHECK(std::abs(w) == doctest::Approx(1.0));
  }
}
