#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops used by the solvers and the Monte-Carlo
// estimators. Every kernel has a scalar reference implementation and,
// on x86-64, an AVX2 variant selected at runtime. The two variants are
// bit-identical: both use the same lane-split accumulation order and
// neither contracts multiply-add, so results do not depend on which
// backend the dispatcher picks.

namespace irsim::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;

  // sum_i x[i]*y[i]
  cplx (*cdotu)(const cplx* x, const cplx* y, std::size_t n);
  // sum_i conj(x[i])*y[i]
  cplx (*cdotc)(const cplx* x, const cplx* y, std::size_t n);
  // sum_i |x[i]|^2
  double (*norm_sq)(const cplx* x, std::size_t n);
  // y[i] += a*x[i]
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // out[i] = conj(x[i])*y[i]
  void (*cmul_conj)(const cplx* x, const cplx* y, cplx* out, std::size_t n);
  // sum_i z[i]*e^{j t_i}, t_i the 1-bit level {0,pi} nearest to -arg(z[i]),
  // ties to level 0
  cplx (*rotate_sum_b1)(const cplx* z, std::size_t n);
  // same with 2-bit levels {0, pi/2, pi, 3pi/2}
  cplx (*rotate_sum_b2)(const cplx* z, std::size_t n);
  // sum_i |z[i]|  (continuous-phase limit of rotate_sum)
  double (*abs_sum)(const cplx* z, std::size_t n);
};

enum class Backend { scalar, avx2 };

const KernelTable& scalar_table();
// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_table();

// Active table; defaults to the best backend the CPU supports.
const KernelTable& active();
Backend active_backend();
// Returns false (and keeps the current table) if the backend is unavailable.
bool select(Backend b);

inline cplx cdotu(std::span<const cplx> x, std::span<const cplx> y) {
  return active().cdotu(x.data(), y.data(), x.size());
}
inline cplx cdotc(std::span<const cplx> x, std::span<const cplx> y) {
  return active().cdotc(x.data(), y.data(), x.size());
}
inline double norm_sq(std::span<const cplx> x) {
  return active().norm_sq(x.data(), x.size());
}
inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void cmul_conj(std::span<const cplx> x, std::span<const cplx> y,
                      std::span<cplx> out) {
  active().cmul_conj(x.data(), y.data(), out.data(), x.size());
}
inline cplx rotate_sum_b1(std::span<const cplx> z) {
  return active().rotate_sum_b1(z.data(), z.size());
}
inline cplx rotate_sum_b2(std::span<const cplx> z) {
  return active().rotate_sum_b2(z.data(), z.size());
}
inline double abs_sum(std::span<const cplx> z) {
  return active().abs_sum(z.data(), z.size());
}

}  // namespace irsim::kernels
