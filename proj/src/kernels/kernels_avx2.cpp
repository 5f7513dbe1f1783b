#include "irsim/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)
#include <immintrin.h>

#include <cmath>
#endif

// AVX2 variants. Each kernel processes two complex doubles per vector and
// mirrors the scalar reference exactly: same per-lane accumulation order,
// same mul/add/sub sequence (addsub instead of FMA), so the results are
// bit-identical to the scalar table on every input.

namespace irsim::kernels {

const KernelTable* avx2_table_impl();

#if defined(__x86_64__) && defined(__AVX2__)

namespace {

const __m256d kSignBoth = _mm256_set1_pd(-0.0);
const __m256d kSignEven = _mm256_setr_pd(-0.0, 0.0, -0.0, 0.0);
const __m256d kSignOdd = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);

inline __m256d dup_re(__m256d v) { return _mm256_permute_pd(v, 0b0000); }
inline __m256d dup_im(__m256d v) { return _mm256_permute_pd(v, 0b1111); }
inline __m256d swap_ri(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// x*y elementwise on two packed complexes
inline __m256d cmul(__m256d x, __m256d y) {
  const __m256d t1 = _mm256_mul_pd(x, dup_re(y));
  const __m256d t2 = _mm256_mul_pd(swap_ri(x), dup_im(y));
  return _mm256_addsub_pd(t1, t2);
}

struct Acc2 {
  double lane[4];  // [re even, im even, re odd, im odd]
  explicit Acc2(__m256d v) { _mm256_storeu_pd(lane, v); }
  void tail(std::size_t i, double re, double im) {
    lane[2 * (i & 1)] += re;
    lane[2 * (i & 1) + 1] += im;
  }
  cplx total() const { return {lane[0] + lane[2], lane[1] + lane[3]}; }
};

cplx cdotu_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    const __m256d vy = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
    acc = _mm256_add_pd(acc, cmul(vx, vy));
  }
  Acc2 a(acc);
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    a.tail(i, xr * yr - xi * yi, xi * yr + xr * yi);
  }
  return a.total();
}

cplx cdotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    vx = _mm256_xor_pd(vx, kSignOdd);  // conj
    const __m256d vy = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
    acc = _mm256_add_pd(acc, cmul(vx, vy));
  }
  Acc2 a(acc);
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = -x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    a.tail(i, xr * yr - xi * yi, xi * yr + xr * yi);
  }
  return a.total();
}

double norm_sq_avx2(const cplx* x, std::size_t n) {
  const __m256d keep_even =
      _mm256_castsi256_pd(_mm256_setr_epi64x(-1, 0, -1, 0));
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    const __m256d sq = _mm256_mul_pd(v, v);
    const __m256d s = _mm256_add_pd(sq, swap_ri(sq));
    acc = _mm256_add_pd(acc, _mm256_and_pd(s, keep_even));
  }
  Acc2 a(acc);
  for (; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    a.tail(i, re * re + im * im, 0.0);
  }
  return a.lane[0] + a.lane[2];
}

void axpy_avx2(cplx al, const cplx* x, cplx* y, std::size_t n) {
  const __m256d va = _mm256_setr_pd(al.real(), al.imag(), al.real(), al.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    const __m256d vy = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(y + i),
                     _mm256_add_pd(vy, cmul(vx, va)));
  }
  const double ar = al.real(), ai = al.imag();
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + (xr * ar - xi * ai),
                y[i].imag() + (xi * ar + xr * ai));
  }
}

void cmul_conj_avx2(const cplx* x, const cplx* y, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    vx = _mm256_xor_pd(vx, kSignOdd);
    const __m256d vy = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), cmul(vx, vy));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = -x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    out[i] = cplx(xr * yr - xi * yi, xi * yr + xr * yi);
  }
}

cplx rotate_sum_b1_avx2(const cplx* z, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(reinterpret_cast<const double*>(z + i));
    const __m256d keep =
        _mm256_cmp_pd(dup_re(v), _mm256_setzero_pd(), _CMP_GE_OQ);
    const __m256d w = _mm256_blendv_pd(_mm256_xor_pd(v, kSignBoth), v, keep);
    acc = _mm256_add_pd(acc, w);
  }
  Acc2 a(acc);
  for (; i < n; ++i) {
    const double zr = z[i].real(), zi = z[i].imag();
    if (zr >= 0.0) {
      a.tail(i, zr, zi);
    } else {
      a.tail(i, -zr, -zi);
    }
  }
  return a.total();
}

cplx rotate_sum_b2_avx2(const cplx* z, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(reinterpret_cast<const double*>(z + i));
    const __m256d re = dup_re(v);
    const __m256d im = dup_im(v);
    const __m256d abs_re = _mm256_andnot_pd(kSignBoth, re);
    const __m256d abs_im = _mm256_andnot_pd(kSignBoth, im);
    const __m256d neg_re = _mm256_xor_pd(re, kSignBoth);
    const __m256d neg_im = _mm256_xor_pd(im, kSignBoth);
    const __m256d m0 = _mm256_cmp_pd(re, abs_im, _CMP_GE_OQ);
    const __m256d m1 = _mm256_cmp_pd(neg_im, abs_re, _CMP_GE_OQ);
    const __m256d m2 = _mm256_cmp_pd(neg_re, abs_im, _CMP_GE_OQ);
    const __m256d sw = swap_ri(v);
    const __m256d w1 = _mm256_xor_pd(sw, kSignEven);  //  i*z
    const __m256d w2 = _mm256_xor_pd(v, kSignBoth);   // -z
    const __m256d w3 = _mm256_xor_pd(sw, kSignOdd);   // -i*z
    __m256d w = _mm256_blendv_pd(w3, w2, m2);
    w = _mm256_blendv_pd(w, w1, m1);
    w = _mm256_blendv_pd(w, v, m0);
    acc = _mm256_add_pd(acc, w);
  }
  Acc2 a(acc);
  for (; i < n; ++i) {
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
    a.tail(i, wr, wi);
  }
  return a.total();
}

double abs_sum_avx2(const cplx* z, std::size_t n) {
  const __m256d keep_even =
      _mm256_castsi256_pd(_mm256_setr_epi64x(-1, 0, -1, 0));
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(reinterpret_cast<const double*>(z + i));
    const __m256d sq = _mm256_mul_pd(v, v);
    const __m256d s = _mm256_add_pd(sq, swap_ri(sq));
    const __m256d rt = _mm256_sqrt_pd(s);
    acc = _mm256_add_pd(acc, _mm256_and_pd(rt, keep_even));
  }
  Acc2 a(acc);
  for (; i < n; ++i) {
    const double re = z[i].real(), im = z[i].imag();
    a.tail(i, std::sqrt(re * re + im * im), 0.0);
  }
  return a.lane[0] + a.lane[2];
}

constexpr KernelTable kAvx2Table{
    "avx2",           cdotu_avx2,           cdotc_avx2,
    norm_sq_avx2,     axpy_avx2,            cmul_conj_avx2,
    rotate_sum_b1_avx2, rotate_sum_b2_avx2, abs_sum_avx2,
};

}  // namespace

const KernelTable* avx2_table_impl() {
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  return &kAvx2Table;
}

#else

const KernelTable* avx2_table_impl() { return nullptr; }

#endif

}  // namespace irsim::kernels
