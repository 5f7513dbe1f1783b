#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

// Minimal dense complex linear algebra. Problem sizes in this project stay
// below ~64, so everything is direct: partial-pivot LU for solves, normal
// equations for the tall pseudo-inverse, power iteration for the largest
// eigenvalue of a PSD matrix.

namespace irsim::linalg {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

class SingularMatrix : public std::runtime_error {
 public:
  SingularMatrix() : std::runtime_error("matrix is numerically singular") {}
};

class RankDeficient : public std::runtime_error {
 public:
  RankDeficient() : std::runtime_error("matrix is numerically rank deficient") {}
};

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix hermitian(const ComplexMatrix& m);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// y = a * x
ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x);

/// Solves a*x = b by partial-pivot LU. Throws SingularMatrix when a pivot
/// falls below 1e-12 times the largest entry magnitude of a.
ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b);

/// Solves a*X = B column by column (one LU factorization).
ComplexMatrix solve_linear_multi(const ComplexMatrix& a, const ComplexMatrix& b);

/// (h^H h)^{-1} h^H for a tall M x K matrix (M >= K). Throws RankDeficient
/// when h^H h is numerically singular.
ComplexMatrix pseudo_inverse_tall(const ComplexMatrix& h);

/// Largest eigenvalue of a hermitian PSD matrix by power iteration,
/// relative tolerance 1e-8 or better.
double max_eigenvalue_psd(const ComplexMatrix& a);

double norm(std::span<const cplx> v);

}  // namespace irsim::linalg
