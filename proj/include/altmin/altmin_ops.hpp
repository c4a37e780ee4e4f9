#pragma once

// Alternating-minimization operators.
//
//   P_S(w)    = A (A^*A)^{-1} A^* w             projection onto range(A)
//   P_A(w)_i  = y_i w_i / |w_i|                 projection onto |w_i| = y_i
//   g(x)      = sum_i y_i (a_i^*x / |a_i^*x|) a_i
//   T(x)      = (A^*A)^{-1} g(x)
//
// A T(x) = P_S(P_A(A x)), so T is one sweep of alternating projections
// written in signal coordinates. Where a_i^*x = 0 the phase is taken as 1.

#include <cmath>

#include "altmin/error.hpp"
#include "altmin/measurement.hpp"
#include "altmin/types.hpp"

namespace altmin {

namespace detail {

/// w_i / |w_i|, or 1 where w_i == 0.
inline CVector unit_phases(const CVector& w) {
  CVector out(w.size());
  for (Index i = 0; i < w.size(); ++i) {
    const double mag = std::abs(w(i));
    out(i) = mag > 0.0 ? w(i) / mag : Complex(1.0, 0.0);
  }
  return out;
}

}  // namespace detail

inline MeasurementVector project_range(const SensingEnsemble& a, const MeasurementVector& w) {
  detail::require(w.size() == a.m(), ErrorKind::dimension, "vector length does not match m");
  return MeasurementVector(a.apply(a.least_squares(w.values())));
}

inline MeasurementVector project_amplitude(const Observations& y, const MeasurementVector& w) {
  detail::require(w.size() == y.size(), ErrorKind::dimension,
                  "vector length does not match observations");
  return MeasurementVector(y.values().cast<Complex>().cwiseProduct(detail::unit_phases(w.values())));
}

inline Signal apply_g(const SensingEnsemble& a, const Observations& y, const Signal& x) {
  detail::require(y.size() == a.m(), ErrorKind::dimension, "observations length does not match m");
  detail::require(!x.is_zero(), ErrorKind::degenerate_input, "g(x) is undefined at x = 0");
  const CVector ax = a.apply(x.values());
  const CVector weights = y.values().cast<Complex>().cwiseProduct(detail::unit_phases(ax));
  return Signal(a.apply_adjoint(weights));
}

/// One alternating-minimization step T(x) = (A^*A)^{-1} g(x).
inline Signal altmin_step(const SensingEnsemble& a, const Observations& y, const Signal& x) {
  return Signal(a.solve_normal(apply_g(a, y, x).values()));
}

}  // namespace altmin
