#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace altmin {

enum class ErrorKind {
  dimension,
  insufficient_measurements,
  covariance,
  singularity,
  degenerate_input,
  degenerate_observations,
  partition,
  domain,
  configuration,
  io,
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::insufficient_measurements: return "insufficient-measurements";
    case ErrorKind::covariance: return "covariance";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::degenerate_observations: return "degenerate-observations";
    case ErrorKind::partition: return "partition";
    case ErrorKind::domain: return "domain";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

}  // namespace detail
}  // namespace altmin
