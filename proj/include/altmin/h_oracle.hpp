#pragma once

// Monte-Carlo machinery for the auxiliary function
//
//   h(theta) = E |a1| |a1 sin(theta) + a2 cos(theta)|,   a1, a2 ~ CN(0,1),
//
// whose ratio h'/h predicts the per-step angle gain of alternating
// minimization: theta(T(x)) ~ theta(x) + atan(h'(theta)/h(theta)).
//
// Reference values: h(0) = (E|a|)^2 = pi/4, h(pi/2) = E|a|^2 = 1,
// h'(0) = h'(pi/2) = 0 (h is even about both endpoints), h''(0) = pi/8 and
// h''(pi/2) = -1/2 (from h(pi/2 - d) = 1 - d^2/4 + o(d^2)).
// For real N(0,1) inputs h(theta) = (2 theta sin(theta) + 2 cos(theta)) / pi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "altmin/error.hpp"
#include "altmin/io.hpp"
#include "altmin/parallel.hpp"
#include "altmin/rng.hpp"
#include "altmin/stats.hpp"

namespace altmin {

inline constexpr double half_pi = std::numbers::pi / 2.0;

namespace detail {

constexpr double angle_slack = 1e-12;

inline void require_angle(double theta) {
  require(theta >= -angle_slack && theta <= half_pi + angle_slack, ErrorKind::domain,
          "angle " + std::to_string(theta) + " outside [0, pi/2]");
}

inline void require_samples(std::size_t samples) {
  require(samples >= 2, ErrorKind::domain, "need at least 2 Monte-Carlo samples");
}

/// |a1| |a1 s + a2 c|
inline double h_integrand(std::complex<double> a1, std::complex<double> a2, double s, double c) {
  return std::abs(a1) * std::abs(a1 * s + a2 * c);
}

/// |a1| d/dtheta |a1 sin + a2 cos| = |a1| Re(conj(u) u') / |u|, 0 where u = 0.
inline double h_prime_integrand(std::complex<double> a1, std::complex<double> a2, double s, double c) {
  const std::complex<double> u = a1 * s + a2 * c;
  const std::complex<double> du = a1 * c - a2 * s;
  const double mag = std::abs(u);
  if (mag == 0.0) return 0.0;
  return std::abs(a1) * (std::conj(u) * du).real() / mag;
}

/// Mean of f(a1, a2) over i.i.d. CN(0,1) pairs drawn from `stream`.
template <class F>
McEstimate mc_over_pairs(std::size_t samples, const RngStream& stream, F&& f) {
  Rng rng = stream.engine();
  MeanAccumulator acc;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto a1 = rng.complex_normal();
    const auto a2 = rng.complex_normal();
    acc.add(f(a1, a2));
  }
  return acc.estimate();
}

}  // namespace detail

inline McEstimate h_mc(double theta, std::size_t samples, const RngStream& rng) {
  detail::require_angle(theta);
  detail::require_samples(samples);
  const double s = std::sin(theta), c = std::cos(theta);
  return detail::mc_over_pairs(samples, rng, [=](auto a1, auto a2) { return detail::h_integrand(a1, a2, s, c); });
}

/// Pathwise-derivative estimator of h'(theta). Uses the same draws as h_mc
/// for the same stream.
inline McEstimate h_prime_mc(double theta, std::size_t samples, const RngStream& rng) {
  detail::require_angle(theta);
  detail::require_samples(samples);
  const double s = std::sin(theta), c = std::cos(theta);
  return detail::mc_over_pairs(samples, rng,
                               [=](auto a1, auto a2) { return detail::h_prime_integrand(a1, a2, s, c); });
}

struct HPointEstimate {
  McEstimate h;
  McEstimate h_prime;
};

/// h and h' from one pass over common draws.
inline HPointEstimate h_and_prime_mc(double theta, std::size_t samples, const RngStream& rng) {
  detail::require_angle(theta);
  detail::require_samples(samples);
  const double s = std::sin(theta), c = std::cos(theta);
  Rng engine = rng.engine();
  MeanAccumulator h_acc, hp_acc;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto a1 = engine.complex_normal();
    const auto a2 = engine.complex_normal();
    h_acc.add(detail::h_integrand(a1, a2, s, c));
    hp_acc.add(detail::h_prime_integrand(a1, a2, s, c));
  }
  return {h_acc.estimate(), hp_acc.estimate()};
}

/// Central difference (h(t+s) - h(t-s)) / 2s with common random numbers.
/// Test oracle for h_prime_mc.
inline McEstimate h_prime_fd(double theta, std::size_t samples, double step, const RngStream& rng) {
  detail::require_angle(theta - step);
  detail::require_angle(theta + step);
  detail::require_samples(samples);
  const double sp = std::sin(theta + step), cp = std::cos(theta + step);
  const double sm = std::sin(theta - step), cm = std::cos(theta - step);
  return detail::mc_over_pairs(samples, rng, [=](auto a1, auto a2) {
    return (detail::h_integrand(a1, a2, sp, cp) - detail::h_integrand(a1, a2, sm, cm)) / (2.0 * step);
  });
}

/// Central second difference (h(t-s) - 2h(t) + h(t+s)) / s^2 with common
/// random numbers across the stencil. The integrand is defined for every
/// real angle and h is even about 0 and pi/2, so the stencil may reach past
/// the ends of [0, pi/2].
inline McEstimate h_second_fd(double theta, std::size_t samples, double step, const RngStream& rng) {
  detail::require_angle(theta);
  detail::require_samples(samples);
  detail::require(step > 0.0 && step <= 0.5, ErrorKind::domain, "finite-difference step must be in (0, 0.5]");
  const double s0 = std::sin(theta - step), c0 = std::cos(theta - step);
  const double s1 = std::sin(theta), c1 = std::cos(theta);
  const double s2 = std::sin(theta + step), c2 = std::cos(theta + step);
  const double inv = 1.0 / (step * step);
  return detail::mc_over_pairs(samples, rng, [=](auto a1, auto a2) {
    return (detail::h_integrand(a1, a2, s0, c0) - 2.0 * detail::h_integrand(a1, a2, s1, c1) +
            detail::h_integrand(a1, a2, s2, c2)) *
           inv;
  });
}

/// Real-Gaussian analogue E|a1||a1 sin + a2 cos| with a1, a2 ~ N(0,1).
inline double h_real_closed_form(double theta) {
  detail::require_angle(theta);
  return (2.0 * theta * std::sin(theta) + 2.0 * std::cos(theta)) / std::numbers::pi;
}

inline McEstimate h_real_mc(double theta, std::size_t samples, const RngStream& rng) {
  detail::require_angle(theta);
  detail::require_samples(samples);
  const double s = std::sin(theta), c = std::cos(theta);
  Rng engine = rng.engine();
  MeanAccumulator acc;
  for (std::size_t i = 0; i < samples; ++i) {
    const double a1 = engine.normal();
    const double a2 = engine.normal();
    acc.add(std::abs(a1) * std::abs(a1 * s + a2 * c));
  }
  return acc.estimate();
}

// --- tables -----------------------------------------------------------------

struct HTable {
  std::vector<double> thetas;
  std::vector<double> h;
  std::vector<double> h_se;
  std::vector<double> h_prime;
  std::vector<double> h_prime_se;
  std::size_t samples = 0;
  RngStream seed;

  std::size_t size() const noexcept { return thetas.size(); }

  void validate() const {
    const std::size_t k = thetas.size();
    detail::require(k >= 1 && h.size() == k && h_se.size() == k && h_prime.size() == k && h_prime_se.size() == k,
                    ErrorKind::domain, "table columns have inconsistent lengths");
    for (std::size_t i = 0; i < k; ++i) {
      detail::require_angle(thetas[i]);
      if (i > 0) detail::require(thetas[i] > thetas[i - 1], ErrorKind::domain, "table grid must be strictly increasing");
      detail::require(h[i] > 0.0, ErrorKind::domain, "table h values must be positive");
    }
  }

  /// CSV with header theta,h,h_se,h_prime,h_prime_se,samples.
  void write_csv(std::ostream& out) const {
    out << "theta,h,h_se,h_prime,h_prime_se,samples\n";
    for (std::size_t i = 0; i < size(); ++i) {
      out << format_double(thetas[i]) << ',' << format_double(h[i]) << ',' << format_double(h_se[i]) << ','
          << format_double(h_prime[i]) << ',' << format_double(h_prime_se[i]) << ',' << samples << '\n';
    }
  }
};

/// k points uniform on [0, pi/2], endpoints included.
inline std::vector<double> uniform_angle_grid(std::size_t k) {
  detail::require(k >= 2, ErrorKind::domain, "angle grid needs at least 2 points");
  std::vector<double> grid(k);
  for (std::size_t i = 0; i < k; ++i) grid[i] = half_pi * static_cast<double>(i) / static_cast<double>(k - 1);
  grid.back() = half_pi;
  return grid;
}

/// Estimates h and h' at every grid angle; point i uses stream.child(i).
inline HTable build_htable(std::vector<double> thetas, std::size_t samples, const RngStream& stream,
                           std::size_t threads = 0) {
  detail::require_samples(samples);
  HTable t;
  const std::size_t k = thetas.size();
  t.thetas = std::move(thetas);
  t.h.resize(k);
  t.h_se.resize(k);
  t.h_prime.resize(k);
  t.h_prime_se.resize(k);
  t.samples = samples;
  t.seed = stream;
  parallel_for(
      k,
      [&](std::size_t i) {
        const auto est = h_and_prime_mc(t.thetas[i], samples, stream.child(i));
        t.h[i] = est.h.value;
        t.h_se[i] = est.h.std_error;
        t.h_prime[i] = est.h_prime.value;
        t.h_prime_se[i] = est.h_prime.std_error;
      },
      threads);
  t.validate();
  return t;
}

struct HInterpolated {
  double h;
  double h_prime;
};

/// Linear interpolation of h and h'. Grid endpoints at exactly 0 or pi/2
/// use h' = 0, the exact value there, instead of their noisy estimate.
inline HInterpolated interpolate(const HTable& table, double theta) {
  detail::require(!table.thetas.empty(), ErrorKind::domain, "empty table");
  const double lo = table.thetas.front(), hi = table.thetas.back();
  detail::require(theta >= lo - detail::angle_slack && theta <= hi + detail::angle_slack, ErrorKind::domain,
                  "angle " + std::to_string(theta) + " not covered by table [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  const auto hp = [&](std::size_t i) {
    const double t = table.thetas[i];
    return (t == 0.0 || t == half_pi) ? 0.0 : table.h_prime[i];
  };
  if (table.size() == 1) return {table.h[0], hp(0)};
  theta = std::clamp(theta, lo, hi);
  auto it = std::upper_bound(table.thetas.begin(), table.thetas.end(), theta);
  std::size_t j = static_cast<std::size_t>(it - table.thetas.begin());
  j = std::clamp<std::size_t>(j, 1, table.size() - 1);
  const std::size_t i = j - 1;
  const double w = (theta - table.thetas[i]) / (table.thetas[j] - table.thetas[i]);
  return {(1.0 - w) * table.h[i] + w * table.h[j], (1.0 - w) * hp(i) + w * hp(j)};
}

/// theta + atan(h'(theta) / h(theta)), clamped to [0, pi/2]. Both endpoints
/// are stationary: 0 maps to 0 and pi/2 to pi/2.
inline double predicted_theta_next(double theta, const HTable& table) {
  detail::require_angle(theta);
  if (theta <= 0.0) return 0.0;
  if (theta >= half_pi) return half_pi;
  const auto v = interpolate(table, theta);
  return std::clamp(theta + std::atan(v.h_prime / v.h), 0.0, half_pi);
}

/// Lipschitz factor of h'' bounding the verification interval:
/// L = (3/2) Gamma(1/2) Gamma(5/2) + Gamma(2) = 9 pi / 8 + 1.
inline double h_second_lipschitz() {
  return 1.5 * std::tgamma(0.5) * std::tgamma(2.5) + std::tgamma(2.0);
}

struct GrowthReport {
  double confidence_z = 4.0;

  // min over interior grid of h'(theta) / min(theta, pi/2 - theta)
  double min_ratio = 0.0;
  double min_ratio_lower = 0.0;
  double min_ratio_upper = 0.0;
  double min_ratio_theta = 0.0;

  // smallest lower confidence bound of h' over the interior grid
  double min_h_prime_lower = 0.0;
  double min_h_prime_lower_theta = 0.0;

  double min_h = 0.0;
  double min_h_se = 0.0;
  double min_h_theta = 0.0;

  double lipschitz_lo = 0.0;
  double lipschitz_hi = 0.0;
  double lipschitz_min_h_prime_lower = 0.0;
  std::size_t lipschitz_points = 0;

  bool interior_pass = false;  // lower bound > 0 on every grid point of (0, pi/2)
  bool pass = false;           // lower bound > 0 on every grid point of the Lipschitz interval
};

/// Numerical check that h' stays positive between the stationary endpoints.
inline GrowthReport verify_growth_condition(const HTable& table, double confidence_z = 4.0) {
  table.validate();
  detail::require(table.size() >= 2, ErrorKind::configuration, "growth check needs at least 2 grid points");
  for (std::size_t i = 1; i < table.size(); ++i) {
    detail::require(table.thetas[i] - table.thetas[i - 1] <= 0.1 + detail::angle_slack, ErrorKind::configuration,
                    "grid spacing exceeds 0.1 near theta=" + std::to_string(table.thetas[i]));
  }
  detail::require(table.thetas.front() <= 0.1 && table.thetas.back() >= half_pi - 0.1, ErrorKind::configuration,
                  "grid does not span [0, pi/2] at spacing 0.1");

  GrowthReport r;
  r.confidence_z = confidence_z;
  const double lip = h_second_lipschitz();
  r.lipschitz_lo = std::numbers::pi / (16.0 * lip);
  r.lipschitz_hi = half_pi - 1.0 / (2.0 * lip);

  bool first_interior = true, first_lipschitz = true;
  r.interior_pass = true;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double t = table.thetas[i];
    if (i == 0 || table.h[i] < r.min_h) {
      r.min_h = table.h[i];
      r.min_h_se = table.h_se[i];
      r.min_h_theta = t;
    }
    if (!(t > 0.0 && t < half_pi)) continue;

    const double dist = std::min(t, half_pi - t);
    const double lower = table.h_prime[i] - confidence_z * table.h_prime_se[i];
    const double ratio = table.h_prime[i] / dist;
    if (first_interior || ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.min_ratio_lower = lower / dist;
      r.min_ratio_upper = (table.h_prime[i] + confidence_z * table.h_prime_se[i]) / dist;
      r.min_ratio_theta = t;
    }
    if (first_interior || lower < r.min_h_prime_lower) {
      r.min_h_prime_lower = lower;
      r.min_h_prime_lower_theta = t;
    }
    first_interior = false;
    if (lower <= 0.0) r.interior_pass = false;

    if (t > r.lipschitz_lo && t < r.lipschitz_hi) {
      if (first_lipschitz || lower < r.lipschitz_min_h_prime_lower) r.lipschitz_min_h_prime_lower = lower;
      first_lipschitz = false;
      ++r.lipschitz_points;
    }
  }
  if (first_interior) r.interior_pass = false;
  r.pass = r.lipschitz_points > 0 && r.lipschitz_min_h_prime_lower > 0.0;
  return r;
}

}  // namespace altmin
