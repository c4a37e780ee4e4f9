#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "altmin/error.hpp"

namespace altmin {

/// Monte-Carlo mean with the standard error of the mean.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Accumulates sum and sum of squares in long double; order-dependent but
/// deterministic for a fixed sample sequence.
class MeanAccumulator {
 public:
  void add(double v) noexcept {
    sum_ += v;
    sum_sq_ += static_cast<long double>(v) * v;
    ++count_;
  }

  std::size_t count() const noexcept { return count_; }

  McEstimate estimate() const noexcept {
    McEstimate e;
    e.samples = count_;
    if (count_ == 0) return e;
    const long double n = static_cast<long double>(count_);
    const long double mean = sum_ / n;
    e.value = static_cast<double>(mean);
    if (count_ > 1) {
      const long double var = std::max<long double>(0.0L, (sum_sq_ - n * mean * mean) / (n - 1.0L));
      e.std_error = static_cast<double>(std::sqrt(var / n));
    }
    return e;
  }

 private:
  long double sum_ = 0.0L;
  long double sum_sq_ = 0.0L;
  std::size_t count_ = 0;
};

/// Linear-interpolation quantile (Hyndman-Fan type 7) of unsorted data.
inline double quantile(std::vector<double> values, double p) {
  detail::require(!values.empty(), ErrorKind::domain, "quantile of an empty sample");
  detail::require(p >= 0.0 && p <= 1.0, ErrorKind::domain, "quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

}  // namespace altmin
