#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rist {

CMat CMat::identity(int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMat CMat::adjoint() const {
  CMat out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMat& CMat::operator+=(const CMat& o) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMat& CMat::operator-=(const CMat& o) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMat& CMat::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

CMat mat_mul(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) throw DimensionError("mat_mul: shape mismatch");
  CMat out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

CVec mat_vec(const CMat& a, std::span<const cplx> x) {
  if (a.cols() != static_cast<int>(x.size()))
    throw DimensionError("mat_vec: shape mismatch");
  CVec out(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    cplx acc = 0.0;
    const cplx* row = a.data().data() + static_cast<std::size_t>(i) * a.cols();
    for (int j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
    out[i] = acc;
  }
  return out;
}

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimensionError("dot_conj: length mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

cplx dot_plain(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimensionError("dot_plain: length mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& x : v) acc += std::norm(x);
  return std::sqrt(acc);
}

double frobenius_norm(const CMat& a) {
  double acc = 0.0;
  for (const auto& x : a.data()) acc += std::norm(x);
  return std::sqrt(acc);
}

double max_abs(const CMat& a) {
  double m = 0.0;
  for (const auto& x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const CMat& a) {
  for (const auto& x : a.data())
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

CMat outer_product(std::span<const cplx> a, std::span<const cplx> b) {
  CMat out(static_cast<int>(a.size()), static_cast<int>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out(static_cast<int>(i), static_cast<int>(j)) = a[i] * std::conj(b[j]);
  return out;
}

HermitianMatrix::HermitianMatrix(CMat m) : mat_(std::move(m)) {
  if (mat_.rows() == 0 || mat_.rows() != mat_.cols())
    throw DimensionError("HermitianMatrix: need square matrix of dim >= 1");
  if (!all_finite(mat_))
    throw DomainError("HermitianMatrix: non-finite entries");
  const int n = mat_.rows();
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      asym = std::max(asym, std::abs(mat_(i, j) - std::conj(mat_(j, i))));
  if (asym > 1e-12 * std::max(1.0, max_abs(mat_)))
    throw DomainError("HermitianMatrix: input is not Hermitian (asymmetry " +
                      std::to_string(asym) + ")");
  for (int i = 0; i < n; ++i) {
    mat_(i, i) = cplx(mat_(i, i).real(), 0.0);
    for (int j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (mat_(i, j) + std::conj(mat_(j, i)));
      mat_(i, j) = avg;
      mat_(j, i) = std::conj(avg);
    }
  }
}

HermitianMatrix hermitian_unchecked(CMat m) {
  return HermitianMatrix(std::move(m), HermitianMatrix::Trusted{});
}

HermitianMatrix HermitianMatrix::identity(int n) {
  return hermitian_unchecked(CMat::identity(n));
}

HermitianMatrix HermitianMatrix::from_diagonal(std::span<const double> d) {
  CMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return hermitian_unchecked(std::move(m));
}

HermitianMatrix HermitianMatrix::from_outer(std::span<const cplx> a) {
  const int n = static_cast<int>(a.size());
  CMat m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = std::norm(a[i]);
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = a[i] * std::conj(a[j]);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return hermitian_unchecked(std::move(m));
}

namespace {

double offdiag_norm(const CMat& a) {
  double acc = 0.0;
  const int n = a.rows();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) acc += 2.0 * std::norm(a(i, j));
  return std::sqrt(acc);
}

}  // namespace

EigenDecomposition hermitian_eig(const HermitianMatrix& h) {
  const int n = h.dim();
  CMat a = h.mat();
  CMat q = CMat::identity(n);

  const double fro = std::max(frobenius_norm(a), 1e-300);
  const double tol = 1e-14 * fro;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_norm(a) <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int qi = p + 1; qi < n; ++qi) {
        const cplx b = a(p, qi);
        const double babs = std::abs(b);
        if (babs < 1e-300) {
          a(p, qi) = 0.0;
          a(qi, p) = 0.0;
          continue;
        }
        const cplx phase = b / babs;  // e^{j beta}
        const double app = a(p, p).real();
        const double aqq = a(qi, qi).real();

        // Real Jacobi angle for [[app, |b|], [|b|, aqq]].
        const double tau = (aqq - app) / (2.0 * babs);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx u = c * phase;        // J[p][p]
        const cplx se = s * phase;       // J[p][q]

        for (int i = 0; i < n; ++i) {
          if (i == p || i == qi) continue;
          const cplx aip = a(i, p);
          const cplx aiq = a(i, qi);
          a(i, p) = u * aip - s * aiq;
          a(i, qi) = se * aip + c * aiq;
          a(p, i) = std::conj(a(i, p));
          a(qi, i) = std::conj(a(i, qi));
        }
        const double cross = 2.0 * c * s * babs;
        a(p, p) = c * c * app - cross + s * s * aqq;
        a(qi, qi) = s * s * app + cross + c * c * aqq;
        a(p, qi) = 0.0;
        a(qi, p) = 0.0;

        for (int i = 0; i < n; ++i) {
          const cplx qip = q(i, p);
          const cplx qiq = q(i, qi);
          q(i, p) = u * qip - s * qiq;
          q(i, qi) = se * qip + c * qiq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMat(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (int i = 0; i < n; ++i) out.eigenvectors(i, k) = q(i, order[k]);
  }
  return out;
}

HermitianMatrix nearest_psd(const HermitianMatrix& a) {
  const EigenDecomposition ed = hermitian_eig(a);
  const int n = a.dim();
  CMat out(n, n);
  for (int k = 0; k < n; ++k) {
    const double lambda = ed.eigenvalues[k];
    if (lambda <= 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const cplx qik = ed.eigenvectors(i, k);
      out(i, i) += lambda * std::norm(qik);
      for (int j = i + 1; j < n; ++j)
        out(i, j) += lambda * qik * std::conj(ed.eigenvectors(j, k));
    }
  }
  for (int i = 0; i < n; ++i) {
    out(i, i) = out(i, i).real();
    for (int j = i + 1; j < n; ++j) out(j, i) = std::conj(out(i, j));
  }
  return hermitian_unchecked(std::move(out));
}

CMat csin_elementwise(const CMat& a) {
  CMat out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    const cplx z = a.data()[k];
    out.data()[k] = cplx(std::sin(z.real()), std::sin(z.imag()));
  }
  return out;
}

namespace {

double clamped_asin(double v, int i, int j) {
  if (v > 1.0) {
    if (v > 1.0 + 1e-9)
      throw DomainError("casin: entry (" + std::to_string(i) + "," +
                        std::to_string(j) + ") component " + std::to_string(v) +
                        " outside [-1, 1]");
    v = 1.0;
  } else if (v < -1.0) {
    if (v < -1.0 - 1e-9)
      throw DomainError("casin: entry (" + std::to_string(i) + "," +
                        std::to_string(j) + ") component " + std::to_string(v) +
                        " outside [-1, 1]");
    v = -1.0;
  }
  return std::asin(v);
}

}  // namespace

CMat casin_elementwise(const CMat& a) {
  CMat out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const cplx z = a(i, j);
      out(i, j) = cplx(clamped_asin(z.real(), i, j), clamped_asin(z.imag(), i, j));
    }
  }
  return out;
}

}  // namespace rist
