#include "irsim/kernels.hpp"

#include <cmath>

// Reference kernels. The accumulation pattern (two interleaved partial
// sums combined as acc0+acc1, products never fused) is part of the
// contract: the AVX2 variants reproduce it lane for lane, so both
// backends return bit-identical values. Compiled with -ffp-contract=off.

namespace irsim::kernels {
namespace {

cplx cdotu_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double re[2] = {0.0, 0.0};
  double im[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re[i & 1] += xr * yr - xi * yi;
    im[i & 1] += xi * yr + xr * yi;
  }
  return {re[0] + re[1], im[0] + im[1]};
}

cplx cdotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double re[2] = {0.0, 0.0};
  double im[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = -x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re[i & 1] += xr * yr - xi * yi;
    im[i & 1] += xi * yr + xr * yi;
  }
  return {re[0] + re[1], im[0] + im[1]};
}

double norm_sq_scalar(const cplx* x, std::size_t n) {
  double acc[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    acc[i & 1] += re * re + im * im;
  }
  return acc[0] + acc[1];
}

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + (ar * xr - ai * xi),
                y[i].imag() + (ai * xr + ar * xi));
  }
}

void cmul_conj_scalar(const cplx* x, const cplx* y, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = -x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    out[i] = cplx(xr * yr - xi * yi, xi * yr + xr * yi);
  }
}

// Rotating z by the 1-bit level nearest to -arg(z) keeps z when Re >= 0
// and negates it otherwise (tie at Re == 0 goes to level 0).
cplx rotate_sum_b1_scalar(const cplx* z, std::size_t n) {
  double re[2] = {0.0, 0.0};
  double im[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double zr = z[i].real(), zi = z[i].imag();
    if (zr >= 0.0) {
      re[i & 1] += zr;
      im[i & 1] += zi;
    } else {
      re[i & 1] += -zr;
      im[i & 1] += -zi;
    }
  }
  return {re[0] + re[1], im[0] + im[1]};
}

// 2-bit levels rotate z into the |arg| <= pi/4 sector; the candidate scan
// order 0, pi/2, pi, 3pi/2 resolves boundary ties toward the lower level.
cplx rotate_sum_b2_scalar(const cplx* z, std::size_t n) {
  double re[2] = {0.0, 0.0};
  double im[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double zr = z[i].real(), zi = z[i].imag();
    double wr, wi;
    if (zr >= std::fabs(zi)) {
      wr = zr;
      wi = zi;
    } else if (-zi >= std::fabs(zr)) {
      wr = -zi;
      wi = zr;
    } else if (-zr >= std::fabs(zi)) {
      wr = -zr;
      wi = -zi;
    } else {
      wr = zi;
      wi = -zr;
    }
    re[i & 1] += wr;
    im[i & 1] += wi;
  }
  return {re[0] + re[1], im[0] + im[1]};
}

double abs_sum_scalar(const cplx* z, std::size_t n) {
  double acc[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double re = z[i].real(), im = z[i].imag();
    acc[i & 1] += std::sqrt(re * re + im * im);
  }
  return acc[0] + acc[1];
}

constexpr KernelTable kScalarTable{
    "scalar",         cdotu_scalar,         cdotc_scalar,
    norm_sq_scalar,   axpy_scalar,          cmul_conj_scalar,
    rotate_sum_b1_scalar, rotate_sum_b2_scalar, abs_sum_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalarTable; }

}  // namespace irsim::kernels
