#pragma once

// Reproducible, stream-splittable random numbers.
//
// An RngStream is an immutable descriptor (master seed, stream id). Every
// consumer that needs randomness builds a fresh Rng engine from it, so the
// same descriptor always yields the same draws no matter which thread or in
// which order trials execute. Child streams are derived by hashing keys into
// the stream id.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace altmin {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t s = a ^ (b * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL);
  splitmix64(s);
  return splitmix64(s);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// xoshiro256** engine with Gaussian helpers. Satisfies
/// UniformRandomBitGenerator so it also works with <random> adaptors.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t master_seed, std::uint64_t stream_id) noexcept {
    std::uint64_t sm = detail::mix(master_seed, stream_id);
    for (auto& word : state_) word = detail::splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on (0, 1]; never returns 0 so log() is safe.
  double uniform_open0() noexcept {
    return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Standard complex normal CN(0,1): real and imaginary parts N(0, 1/2).
  /// Box-Muller in polar form: |a|^2 = -log(u) ~ Exp(1), uniform phase.
  std::complex<double> complex_normal() noexcept {
    const double radius = std::sqrt(-std::log(uniform_open0()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  /// Standard real normal N(0,1).
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const auto c = complex_normal() * std::numbers::sqrt2;
    spare_ = c.imag();
    has_spare_ = true;
    return c.real();
  }

 private:
  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Identification of one independent random stream.
class RngStream {
 public:
  constexpr RngStream() = default;
  constexpr RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
      : master_seed_(master_seed), stream_id_(stream_id) {}

  constexpr std::uint64_t master_seed() const noexcept { return master_seed_; }
  constexpr std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Fresh engine positioned at the start of this stream.
  Rng engine() const noexcept { return Rng(master_seed_, stream_id_); }

  /// Derived stream keyed by `key`; distinct keys give independent streams.
  constexpr RngStream child(std::uint64_t key) const noexcept {
    return {master_seed_, detail::mix(stream_id_ + 0x5851f42d4c957f2dULL, key)};
  }

  constexpr RngStream child(std::initializer_list<std::uint64_t> keys) const noexcept {
    RngStream s = *this;
    for (auto k : keys) s = s.child(k);
    return s;
  }

  friend constexpr bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t master_seed_ = 0;
  std::uint64_t stream_id_ = 0;
};

}  // namespace altmin
