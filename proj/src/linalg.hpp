#pragma once

#include <complex>
#include <span>
#include <vector>

#include "errors.hpp"

namespace rist {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Dense row-major complex matrix. Sized for desk-scale problems (M = 16,
// N = 100); no BLAS-level tuning.
class CMat {
 public:
  CMat() = default;
  CMat(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int i, int j) { return data_[i * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> row(int i) const {
    return {data_.data() + i * cols_, static_cast<std::size_t>(cols_)};
  }

  CMat adjoint() const;

  CMat& operator+=(const CMat& o);
  CMat& operator-=(const CMat& o);
  CMat& operator*=(double s);

  friend CMat operator+(CMat a, const CMat& b) { return a += b; }
  friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
  friend CMat operator*(CMat a, double s) { return a *= s; }
  friend CMat operator*(double s, CMat a) { return a *= s; }

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> data_;
};

CMat mat_mul(const CMat& a, const CMat& b);
CVec mat_vec(const CMat& a, std::span<const cplx> x);

// sum conj(a_i) b_i
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);
// sum a_i b_i (no conjugation)
cplx dot_plain(std::span<const cplx> a, std::span<const cplx> b);

double norm2(std::span<const cplx> v);        // Euclidean norm
double frobenius_norm(const CMat& a);
double max_abs(const CMat& a);
bool all_finite(const CMat& a);

CMat outer_product(std::span<const cplx> a, std::span<const cplx> b);  // a b^H

// Complex square matrix with Hermitian symmetry. Construction symmetrizes
// the input; asymmetry beyond 1e-12 (relative to the largest entry) or any
// non-finite entry is rejected.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;  // empty placeholder, dim 0
  explicit HermitianMatrix(CMat m);

  static HermitianMatrix identity(int n);
  static HermitianMatrix from_diagonal(std::span<const double> d);
  static HermitianMatrix from_outer(std::span<const cplx> a);  // a a^H

  int dim() const { return mat_.rows(); }
  const CMat& mat() const { return mat_; }
  const cplx& operator()(int i, int j) const { return mat_(i, j); }

 private:
  struct Trusted {};
  HermitianMatrix(CMat m, Trusted) : mat_(std::move(m)) {}
  CMat mat_;

  friend HermitianMatrix hermitian_unchecked(CMat m);
};

// Internal fast path for matrices that are Hermitian by construction.
HermitianMatrix hermitian_unchecked(CMat m);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // sorted descending
  CMat eigenvectors;                // unitary, columns match eigenvalues
};

// Cyclic Jacobi rotations on the complex Hermitian matrix; unconditionally
// convergent for Hermitian input. Eigenvalues sorted descending, ties broken
// by original index.
EigenDecomposition hermitian_eig(const HermitianMatrix& a);

// Projection onto the PSD cone in Frobenius norm: negative-eigenvalue terms
// of the spectral decomposition are dropped.
HermitianMatrix nearest_psd(const HermitianMatrix& a);

// csin(z) = sin(Re z) + j sin(Im z), applied entrywise.
CMat csin_elementwise(const CMat& a);

// casin(z) = asin(Re z) + j asin(Im z), applied entrywise. Components must
// lie in [-1, 1]; excursions up to 1e-9 are clamped, larger ones throw.
CMat casin_elementwise(const CMat& a);

}  // namespace rist
