#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>

#include "altmin/error.hpp"

namespace altmin {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// A vector in C^n: the unknown signal z or an estimate x.
class Signal {
 public:
  explicit Signal(CVector values) : values_(std::move(values)) {
    detail::require(values_.size() >= 1, ErrorKind::dimension, "signal length must be >= 1");
    detail::require(values_.allFinite(), ErrorKind::domain, "signal has non-finite entries");
  }

  static Signal zeros(Index n) { return Signal(CVector::Zero(n)); }

  const CVector& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }
  double norm() const { return values_.norm(); }
  bool is_zero() const { return values_.isZero(0.0); }

  Signal scaled(Complex c) const { return Signal(c * values_); }
  Signal normalized() const {
    const double nrm = norm();
    detail::require(nrm > 0.0, ErrorKind::degenerate_input, "cannot normalize a zero signal");
    return Signal(values_ / nrm);
  }

 private:
  CVector values_;
};

/// Amplitude observations y_i = |a_i^* z|; nonnegative.
class Observations {
 public:
  explicit Observations(RVector values) : values_(std::move(values)) {
    detail::require(values_.allFinite(), ErrorKind::domain, "observations have non-finite entries");
    detail::require((values_.array() >= 0.0).all(), ErrorKind::domain,
                    "observations must be nonnegative");
  }

  const RVector& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }
  double norm() const { return values_.norm(); }

 private:
  RVector values_;
};

/// A vector in observation space C^m (the w iterates of the projection form).
class MeasurementVector {
 public:
  explicit MeasurementVector(CVector values) : values_(std::move(values)) {}

  const CVector& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }

 private:
  CVector values_;
};

}  // namespace altmin
