#pragma once

#include <algorithm>
#include <cmath>

#include "altmin/error.hpp"
#include "altmin/measurement.hpp"
#include "altmin/types.hpp"

namespace altmin {

namespace detail {

inline void require_same_length(const Signal& x, const Signal& z) {
  require(x.size() == z.size(), ErrorKind::dimension, "signals have different lengths");
}

}  // namespace detail

/// theta(x) = arcsin(|x^*z| / (||x|| ||z||)), in [0, pi/2].
///
/// Evaluated as atan2(|x^*z|/||z||, ||x - P_z x||). This equals the arcsin
/// form exactly in real arithmetic, cannot leave [0, pi/2], and keeps full
/// precision near pi/2 where arcsin loses half the digits.
inline double theta(const Signal& x, const Signal& z) {
  detail::require_same_length(x, z);
  detail::require(!x.is_zero() && !z.is_zero(), ErrorKind::degenerate_input,
                  "theta is undefined for zero vectors");
  const double z_norm = z.norm();
  const Complex zx = z.values().dot(x.values());  // z^* x
  const CVector perp = x.values() - (zx / (z_norm * z_norm)) * z.values();
  return std::atan2(std::abs(zx) / z_norm, perp.norm());
}

/// inf_phi ||e^{i phi} z - x|| = sqrt(||x||^2 + ||z||^2 - 2|x^*z|).
/// Computed by aligning z with the optimal phase arg(z^*x), which avoids
/// cancellation when x is close to the orbit of z.
inline double dist_phase(const Signal& x, const Signal& z) {
  detail::require_same_length(x, z);
  const Complex zx = z.values().dot(x.values());
  const double mag = std::abs(zx);
  const Complex phase = mag > 0.0 ? zx / mag : Complex(1.0, 0.0);
  return (x.values() - phase * z.values()).norm();
}

/// Relative amplitude residual || |Ax| - y || / ||y||.
inline double residual(const SensingEnsemble& a, const Observations& y, const Signal& x) {
  detail::require(y.size() == a.m(), ErrorKind::dimension, "observations length does not match m");
  const double y_norm = y.norm();
  detail::require(y_norm > 0.0, ErrorKind::degenerate_observations, "observations are all zero");
  return (a.apply(x.values()).cwiseAbs() - y.values()).norm() / y_norm;
}

/// Recovery up to global phase and scale: dist_phase of the normalized pair <= tol.
inline bool success(const Signal& x, const Signal& z, double tol) {
  detail::require_same_length(x, z);
  detail::require(!x.is_zero() && !z.is_zero(), ErrorKind::degenerate_input,
                  "success is undefined for zero vectors");
  return dist_phase(x.normalized(), z.normalized()) <= tol;
}

}  // namespace altmin
