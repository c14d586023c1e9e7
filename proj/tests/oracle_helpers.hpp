// Test-only independent oracles. These deliberately use a different engine
// (Eigen) and different algorithms than the library so the two routes cannot
// share a bug.
#pragma once

#include <Eigen/Dense>
#include <functional>

#include "linalg.hpp"
#include "rng.hpp"

namespace oracle {

inline Eigen::MatrixXcd to_eigen(const rist::CMat& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline rist::CMat from_eigen(const Eigen::MatrixXcd& m) {
  rist::CMat out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

// Frobenius-nearest PSD matrix via Eigen's self-adjoint eigensolver.
inline rist::CMat nearest_psd(const rist::CMat& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m));
  Eigen::VectorXd vals = es.eigenvalues();
  for (int i = 0; i < vals.size(); ++i) vals(i) = std::max(vals(i), 0.0);
  const Eigen::MatrixXcd out = es.eigenvectors() * vals.asDiagonal() *
                               es.eigenvectors().adjoint();
  return from_eigen(out);
}

inline Eigen::VectorXd eigenvalues(const rist::CMat& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m));
  return es.eigenvalues();
}

inline double min_eigenvalue(const rist::CMat& m) {
  return eigenvalues(m).minCoeff();
}

// Golden-section minimization of a unimodal scalar function on [lo, hi].
inline double golden_section_min(const std::function<double(double)>& f,
                                 double lo, double hi, double tol = 1e-10) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Random complex matrix with CN(0,1) entries.
inline rist::CMat random_cmat(int rows, int cols, rist::PhiloxStream& rng) {
  rist::CMat m(rows, cols);
  for (auto& v : m.data()) v = rng.cgaussian();
  return m;
}

// Random Hermitian with entries roughly in [-scale, scale].
inline rist::HermitianMatrix random_hermitian(int n, rist::PhiloxStream& rng,
                                              double scale = 1.0) {
  rist::CMat m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = scale * (2.0 * rng.uniform() - 1.0);
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = scale * rist::cplx(2.0 * rng.uniform() - 1.0,
                                   2.0 * rng.uniform() - 1.0);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return rist::hermitian_unchecked(std::move(m));
}

// Random unit-diagonal PSD matrix (normalized Gram matrix).
inline rist::HermitianMatrix random_unit_diag_psd(int n,
                                                  rist::PhiloxStream& rng) {
  const rist::CMat w = random_cmat(n, n + 2, rng);
  rist::CMat g = rist::mat_mul(w, w.adjoint());
  for (int i = 0; i < n; ++i) {
    const double d = std::sqrt(g(i, i).real());
    for (int j = 0; j < n; ++j) {
      g(i, j) /= d;
      g(j, i) /= d;
    }
  }
  for (int i = 0; i < n; ++i) g(i, i) = 1.0;
  return rist::hermitian_unchecked(std::move(g));
}

}  // namespace oracle
