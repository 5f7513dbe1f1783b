#include "irsim/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "irsim/kernels.hpp"

namespace irsim::linalg {

namespace {

constexpr double kPivotRel = 1e-12;

struct Lu {
  ComplexMatrix lu;
  std::vector<std::size_t> perm;
};

// Partial-pivot LU; pivots below kPivotRel * max|entry| count as singular.
Lu factor(const ComplexMatrix& a) {
  assert(a.rows() == a.cols());
  const std::size_t n = a.rows();
  double amax = 0.0;
  for (const cplx& v : a.data()) amax = std::max(amax, std::abs(v));
  const double threshold = kPivotRel * amax;

  Lu f{a, std::vector<std::size_t>(n)};
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(f.lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = std::abs(f.lu(i, k));
      if (m > best) {
        best = m;
        p = i;
      }
    }
    if (!(best > threshold) || best == 0.0) throw SingularMatrix();
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
      std::swap(f.perm[k], f.perm[p]);
    }
    const cplx pivot = f.lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx m = f.lu(i, k) / pivot;
      f.lu(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
    }
  }
  return f;
}

ComplexVector lu_solve(const Lu& f, const ComplexVector& b) {
  const std::size_t n = f.lu.rows();
  ComplexVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

}  // namespace

ComplexMatrix hermitian(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  assert(a.cols() == b.rows());
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      kernels::axpy(a(i, k), b.row(k), out.row(i));
  return out;
}

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x) {
  assert(a.cols() == x.size());
  ComplexVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = kernels::cdotu(a.row(i), x);
  return y;
}

ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b) {
  return lu_solve(factor(a), b);
}

ComplexMatrix solve_linear_multi(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Lu f = factor(a);
  const std::size_t n = a.rows();
  ComplexMatrix x(n, b.cols());
  ComplexVector col(n);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
    const ComplexVector sol = lu_solve(f, col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
  }
  return x;
}

ComplexMatrix pseudo_inverse_tall(const ComplexMatrix& h) {
  assert(h.rows() >= h.cols());
  const ComplexMatrix hh = hermitian(h);
  const ComplexMatrix gram = matmul(hh, h);  // K x K
  try {
    return solve_linear_multi(gram, hh);
  } catch (const SingularMatrix&) {
    throw RankDeficient();
  }
}

double max_eigenvalue_psd(const ComplexMatrix& a) {
  assert(a.rows() == a.cols());
  const std::size_t n = a.rows();
  if (n == 0) return 0.0;

  // Deterministic non-degenerate start.
  ComplexVector x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = cplx(1.0 + 1.0 / double(i + 1), 0.5 / double(i + 1));

  double lambda = 0.0;
  for (int iter = 0; iter < 200000; ++iter) {
    ComplexVector y = matvec(a, x);
    const double ny = norm(y);
    if (ny == 0.0) return 0.0;  // x in the null space; PSD with A*x = 0
    for (cplx& v : y) v /= ny;
    const ComplexVector ay = matvec(a, y);
    const double next = std::real(kernels::cdotc(y, ay));
    x = std::move(y);
    if (iter > 0 && std::abs(next - lambda) <= 1e-12 * std::max(next, 1e-300)) {
      return next;
    }
    lambda = next;
  }
  return lambda;
}

double norm(std::span<const cplx> v) { return std::sqrt(kernels::norm_sq(v)); }

}  // namespace irsim::linalg
