#pragma once

// Signals, complex-Gaussian sensing ensembles and amplitude observations.
//
// Convention: CN(0,1) has real and imaginary parts N(0, 1/2) each, so
// E|a|^2 = 1. Row i of the sensing matrix A is a_i^*, hence (A z)_i = a_i^* z.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "altmin/error.hpp"
#include "altmin/rng.hpp"
#include "altmin/types.hpp"

namespace altmin {

/// m x n sensing matrix with a cached Householder QR, used for every
/// least-squares solve against A^*A.
class SensingEnsemble {
 public:
  explicit SensingEnsemble(CMatrix rows) : rows_(std::move(rows)) {
    detail::require(rows_.cols() >= 1, ErrorKind::dimension, "ensemble needs n >= 1");
    detail::require(rows_.rows() >= rows_.cols(), ErrorKind::insufficient_measurements,
                    "need m >= n, got m=" + std::to_string(rows_.rows()) +
                        " n=" + std::to_string(rows_.cols()));
    detail::require(rows_.allFinite(), ErrorKind::domain, "sensing matrix has non-finite entries");
    qr_.compute(rows_);

    const auto diag = qr_.matrixQR().diagonal().cwiseAbs();
    const double largest = diag.maxCoeff();
    const double eps = std::numeric_limits<double>::epsilon();
    rank_deficient_ = !(largest > 0.0) ||
                      diag.minCoeff() <= largest * static_cast<double>(rows_.rows()) * eps;
  }

  Index m() const noexcept { return rows_.rows(); }
  Index n() const noexcept { return rows_.cols(); }
  const CMatrix& matrix() const noexcept { return rows_; }
  bool rank_deficient() const noexcept { return rank_deficient_; }

  /// Upper-triangular n x n factor R with A = Q R.
  CMatrix r_factor() const {
    return qr_.matrixQR().topRows(n()).template triangularView<Eigen::Upper>();
  }

  /// Q R, for checking that the factorization reproduces A.
  CMatrix reconstruct() const {
    CMatrix full = CMatrix::Zero(m(), n());
    full.topRows(n()) = r_factor();
    return qr_.householderQ() * full;
  }

  CVector apply(const CVector& x) const {
    detail::require(x.size() == n(), ErrorKind::dimension, "signal length does not match n");
    return rows_ * x;
  }

  CVector apply_adjoint(const CVector& w) const {
    detail::require(w.size() == m(), ErrorKind::dimension, "vector length does not match m");
    return rows_.adjoint() * w;
  }

  /// Solves (A^*A) u = v as R^{-1} R^{-*} v.
  CVector solve_normal(const CVector& v) const {
    require_nonsingular();
    detail::require(v.size() == n(), ErrorKind::dimension, "right-hand side length does not match n");
    const auto r = qr_.matrixQR().topRows(n()).template triangularView<Eigen::Upper>();
    CVector u = r.adjoint().solve(v);
    r.solveInPlace(u);
    return u;
  }

  /// argmin_u ||A u - w||, i.e. (A^*A)^{-1} A^* w through Q^* w.
  CVector least_squares(const CVector& w) const {
    require_nonsingular();
    detail::require(w.size() == m(), ErrorKind::dimension, "vector length does not match m");
    CVector qw = qr_.householderQ().adjoint() * w;
    return qr_.matrixQR().topRows(n()).template triangularView<Eigen::Upper>().solve(qw.head(n()));
  }

  double min_singular_value() const {
    Eigen::JacobiSVD<CMatrix> svd(r_factor());
    return svd.singularValues().minCoeff();
  }

  /// Sub-ensemble made of the given rows, with its own factorization.
  SensingEnsemble select_rows(std::span<const Index> indices) const {
    CMatrix sub(static_cast<Index>(indices.size()), n());
    for (std::size_t k = 0; k < indices.size(); ++k) sub.row(static_cast<Index>(k)) = rows_.row(indices[k]);
    return SensingEnsemble(std::move(sub));
  }

 private:
  void require_nonsingular() const {
    detail::require(!rank_deficient_, ErrorKind::singularity, "normal matrix A^*A is singular");
  }

  CMatrix rows_;
  Eigen::HouseholderQR<CMatrix> qr_;
  bool rank_deficient_ = false;
};

/// Hermitian positive-definite covariance with its cached Hermitian square root.
class CovarianceSpec {
 public:
  explicit CovarianceSpec(CMatrix sigma) : sigma_(std::move(sigma)) {
    detail::require(sigma_.rows() >= 1 && sigma_.rows() == sigma_.cols(), ErrorKind::covariance,
                    "covariance must be square and non-empty");
    detail::require(sigma_.allFinite(), ErrorKind::covariance, "covariance has non-finite entries");
    const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
    detail::require((sigma_ - sigma_.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
                    ErrorKind::covariance, "covariance is not Hermitian");

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(sigma_);
    detail::require(eig.info() == Eigen::Success, ErrorKind::covariance, "eigendecomposition failed");
    const RVector& lambda = eig.eigenvalues();
    const double cutoff = static_cast<double>(sigma_.rows()) *
                          std::numeric_limits<double>::epsilon() * lambda.cwiseAbs().maxCoeff();
    detail::require(lambda.minCoeff() > cutoff, ErrorKind::covariance,
                    "covariance is not positive definite");
    sqrt_ = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * eig.eigenvectors().adjoint();
  }

  static CovarianceSpec diagonal(std::span<const double> entries) {
    RVector d(static_cast<Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) d(static_cast<Index>(i)) = entries[i];
    return CovarianceSpec(d.cast<Complex>().asDiagonal().toDenseMatrix());
  }

  Index n() const noexcept { return sigma_.rows(); }
  const CMatrix& matrix() const noexcept { return sigma_; }
  const CMatrix& sqrt() const noexcept { return sqrt_; }

 private:
  CMatrix sigma_;
  CMatrix sqrt_;
};

// --- sampling ---------------------------------------------------------------

inline CVector complex_normal_vector(Index n, Rng& rng) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

inline Signal sample_signal(Index n, bool unit, Rng& rng) {
  detail::require(n >= 1, ErrorKind::dimension, "signal dimension must be >= 1");
  Signal s(complex_normal_vector(n, rng));
  return unit ? s.normalized() : s;
}

inline Signal sample_signal(Index n, bool unit, const RngStream& stream) {
  Rng rng = stream.engine();
  return sample_signal(n, unit, rng);
}

/// Haar-uniform point on the complex unit sphere (normalized CN(0, I)).
inline Signal random_unit(Index n, Rng& rng) { return sample_signal(n, true, rng); }

inline Signal random_unit(Index n, const RngStream& stream) {
  Rng rng = stream.engine();
  return random_unit(n, rng);
}

inline SensingEnsemble sample_sensing(Index m, Index n, Rng& rng) {
  detail::require(n >= 1, ErrorKind::dimension, "signal dimension must be >= 1");
  detail::require(m >= n, ErrorKind::insufficient_measurements,
                  "need m >= n, got m=" + std::to_string(m) + " n=" + std::to_string(n));
  CMatrix a(m, n);
  // Row-major fill so the draw order is "row by row", independent of storage.
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = rng.complex_normal();
  return SensingEnsemble(std::move(a));
}

inline SensingEnsemble sample_sensing(Index m, Index n, const RngStream& stream) {
  Rng rng = stream.engine();
  return sample_sensing(m, n, rng);
}

/// Rows a_i ~ CN(0, Sigma): a_i = Sigma^{1/2} g_i, so a_i^* = g_i^* Sigma^{1/2}.
inline SensingEnsemble sample_sensing_cov(Index m, const CovarianceSpec& cov, Rng& rng) {
  const Index n = cov.n();
  detail::require(m >= n, ErrorKind::insufficient_measurements,
                  "need m >= n, got m=" + std::to_string(m) + " n=" + std::to_string(n));
  CMatrix g(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  return SensingEnsemble(g * cov.sqrt());
}

inline SensingEnsemble sample_sensing_cov(Index m, const CovarianceSpec& cov, const RngStream& stream) {
  Rng rng = stream.engine();
  return sample_sensing_cov(m, cov, rng);
}

/// y_i = |a_i^* z|.
inline Observations observe(const SensingEnsemble& a, const Signal& z) {
  return Observations(a.apply(z.values()).cwiseAbs());
}

}  // namespace altmin
