#pragma once

// Flat "key = value" experiment configuration.
//
// Lines are `key = value`; `#` starts a comment. Angle lists accept plain
// numbers, `pi` expressions (`pi`, `pi/2`, `2*pi/3`, `0.5*pi`) and
// `linspace(a, b, k)`.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "altmin/error.hpp"
#include "altmin/io.hpp"

namespace altmin {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] inline void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw Error(ErrorKind::configuration,
              "field '" + std::string(key) + "': cannot parse '" + std::string(value) + "' as " + std::string(expected));
}

inline double parse_plain_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) bad_value(key, text, "a number");
  return v;
}

/// number | pi | pi/d | c*pi | c*pi/d
inline double parse_angle(std::string_view key, std::string_view text) {
  text = trim(text);
  const auto pi_pos = text.find("pi");
  if (pi_pos == std::string_view::npos) return parse_plain_double(key, text);
  double coef = 1.0;
  std::string_view before = trim(text.substr(0, pi_pos));
  if (!before.empty()) {
    if (before.back() != '*') bad_value(key, text, "an angle");
    coef = parse_plain_double(key, before.substr(0, before.size() - 1));
  }
  double denom = 1.0;
  std::string_view after = trim(text.substr(pi_pos + 2));
  if (!after.empty()) {
    if (after.front() != '/') bad_value(key, text, "an angle");
    denom = parse_plain_double(key, after.substr(1));
    if (denom == 0.0) bad_value(key, text, "an angle");
  }
  return coef * std::numbers::pi / denom;
}

template <class UInt>
UInt parse_unsigned(std::string_view key, std::string_view text) {
  text = trim(text);
  // Accept integral scientific notation such as 1e6.
  if (text.find_first_of("eE.") != std::string_view::npos) {
    const double v = parse_plain_double(key, text);
    if (v < 0.0 || v != static_cast<double>(static_cast<UInt>(v))) bad_value(key, text, "a nonnegative integer");
    return static_cast<UInt>(v);
  }
  UInt v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    bad_value(key, text, "a nonnegative integer");
  return v;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  bad_value(key, text, "a boolean");
}

inline std::vector<double> parse_angle_list(std::string_view key, std::string_view text) {
  text = trim(text);
  std::vector<double> out;
  if (text.starts_with("linspace(")) {
    if (!text.ends_with(")")) bad_value(key, text, "linspace(a, b, k)");
    const auto args = split(text.substr(9, text.size() - 10), ',');
    if (args.size() != 3) bad_value(key, text, "linspace(a, b, k)");
    const double a = parse_angle(key, args[0]);
    const double b = parse_angle(key, args[1]);
    const auto k = parse_unsigned<std::size_t>(key, args[2]);
    if (k < 1) bad_value(key, text, "linspace with k >= 1");
    for (std::size_t i = 0; i < k; ++i)
      out.push_back(k == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1));
    if (k > 1) out.back() = b;
    return out;
  }
  if (text.empty()) return out;
  for (auto part : split(text, ',')) out.push_back(parse_angle(key, part));
  return out;
}

inline std::vector<double> parse_double_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (auto part : split(text, ',')) out.push_back(parse_plain_double(key, part));
  return out;
}

inline std::vector<std::size_t> parse_count_list(std::string_view key, std::string_view text) {
  std::vector<std::size_t> out;
  if (trim(text).empty()) return out;
  for (auto part : split(text, ',')) out.push_back(parse_unsigned<std::size_t>(key, part));
  return out;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) out += format_double(values[i]);
    else out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace detail

/// Parses `key = value` lines. Later duplicates override earlier ones.
inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  for (auto line : detail::split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::configuration, "line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::configuration, "line " + std::to_string(line_no) + ": empty key");
    out[std::string(key)] = std::string(detail::trim(line.substr(eq + 1)));
  }
  return out;
}

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"step-map", "h-curve", "expectation", "recovery"};
  return names;
}

struct ExperimentConfig {
  std::string experiment = "step-map";

  // problem size
  std::size_t n = 64;
  std::size_t m = 4096;
  std::size_t blocks = 4;

  // step-map / expectation
  std::vector<double> thetas;
  std::vector<double> etas{0.0, std::numbers::pi / 3.0};
  std::size_t trials = 1000;

  // h table and expectation Monte Carlo
  std::size_t samples = 1'000'000;
  std::size_t table_points = 64;
  std::size_t expectation_samples = 1'000'000;

  // recovery sweep
  std::vector<std::size_t> n_list{32};
  std::vector<double> ratio_list{128.0};
  std::vector<std::size_t> b_list{4};
  std::vector<double> sigma_diag;  // empty = identity; shorter than n is padded with 1
  double residual_tol = 1e-8;
  std::size_t max_iters = 500;
  double success_tol = 1e-6;
  double min_success_rate = 0.95;
  bool timing = false;

  // acceptance tolerances
  double q50_tol = 0.05;
  double fixed_point_tol = 1e-9;
  double check_lo = 0.3;
  double check_hi = 1.4;
  double coef_z = 5.0;
  double confidence_z = 4.0;

  std::uint64_t seed = 1;
  std::filesystem::path out = "results";
  std::size_t threads = 0;

  /// Documented defaults for one experiment.
  static ExperimentConfig defaults(std::string_view name) {
    ExperimentConfig c;
    c.experiment = std::string(name);
    if (name == "step-map") {
      c.thetas = detail::parse_angle_list("thetas", "linspace(0.1, pi/2, 16)");
    } else if (name == "h-curve") {
      c.trials = 1;
    } else if (name == "expectation") {
      c.n = 4;
      c.m = 4;
      c.trials = 1;
      c.thetas = {0.3, 0.8, 1.2};
    } else if (name == "recovery") {
      c.n = 32;
      c.m = 4096;
      c.trials = 50;
    } else {
      throw Error(ErrorKind::configuration, "unknown experiment '" + std::string(name) + "'");
    }
    return c;
  }

  void set(std::string_view key, std::string_view value) {
    using namespace detail;
    if (key == "experiment") {
      const auto name = std::string(trim(value));
      const auto& names = experiment_names();
      if (std::find(names.begin(), names.end(), name) == names.end()) bad_value(key, value, "an experiment name");
      experiment = name;
    } else if (key == "n") n = parse_unsigned<std::size_t>(key, value);
    else if (key == "m") m = parse_unsigned<std::size_t>(key, value);
    else if (key == "B" || key == "blocks") blocks = parse_unsigned<std::size_t>(key, value);
    else if (key == "thetas") thetas = parse_angle_list(key, value);
    else if (key == "etas") etas = parse_angle_list(key, value);
    else if (key == "trials") trials = parse_unsigned<std::size_t>(key, value);
    else if (key == "samples") samples = parse_unsigned<std::size_t>(key, value);
    else if (key == "table_points") table_points = parse_unsigned<std::size_t>(key, value);
    else if (key == "expectation_samples") expectation_samples = parse_unsigned<std::size_t>(key, value);
    else if (key == "n_list") n_list = parse_count_list(key, value);
    else if (key == "ratio_list") ratio_list = parse_double_list(key, value);
    else if (key == "b_list") b_list = parse_count_list(key, value);
    else if (key == "sigma_diag") sigma_diag = parse_double_list(key, value);
    else if (key == "residual_tol") residual_tol = parse_plain_double(key, value);
    else if (key == "max_iters") max_iters = parse_unsigned<std::size_t>(key, value);
    else if (key == "success_tol") success_tol = parse_plain_double(key, value);
    else if (key == "min_success_rate") min_success_rate = parse_plain_double(key, value);
    else if (key == "timing") timing = parse_bool(key, value);
    else if (key == "q50_tol") q50_tol = parse_plain_double(key, value);
    else if (key == "fixed_point_tol") fixed_point_tol = parse_plain_double(key, value);
    else if (key == "check_lo") check_lo = parse_angle(key, value);
    else if (key == "check_hi") check_hi = parse_angle(key, value);
    else if (key == "coef_z") coef_z = parse_plain_double(key, value);
    else if (key == "confidence_z") confidence_z = parse_plain_double(key, value);
    else if (key == "seed") seed = parse_unsigned<std::uint64_t>(key, value);
    else if (key == "out") out = std::string(trim(value));
    else if (key == "threads") threads = parse_unsigned<std::size_t>(key, value);
    else throw Error(ErrorKind::configuration, "unknown field '" + std::string(key) + "'");
  }

  void apply(const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) set(k, v);
  }

  /// Canonical key-value echo, used for manifests and the input hash.
  /// Excludes `out` and `threads`, which do not affect results.
  std::map<std::string, std::string> to_key_values() const {
    using detail::join;
    std::map<std::string, std::string> kv{
        {"experiment", experiment},
        {"n", std::to_string(n)},
        {"m", std::to_string(m)},
        {"blocks", std::to_string(blocks)},
        {"thetas", join(thetas)},
        {"etas", join(etas)},
        {"trials", std::to_string(trials)},
        {"samples", std::to_string(samples)},
        {"table_points", std::to_string(table_points)},
        {"expectation_samples", std::to_string(expectation_samples)},
        {"n_list", join(n_list)},
        {"ratio_list", join(ratio_list)},
        {"b_list", join(b_list)},
        {"sigma_diag", join(sigma_diag)},
        {"residual_tol", format_double(residual_tol)},
        {"max_iters", std::to_string(max_iters)},
        {"success_tol", format_double(success_tol)},
        {"min_success_rate", format_double(min_success_rate)},
        {"timing", timing ? "true" : "false"},
        {"q50_tol", format_double(q50_tol)},
        {"fixed_point_tol", format_double(fixed_point_tol)},
        {"check_lo", format_double(check_lo)},
        {"check_hi", format_double(check_hi)},
        {"coef_z", format_double(coef_z)},
        {"confidence_z", format_double(confidence_z)},
        {"seed", std::to_string(seed)},
    };
    return kv;
  }

  std::string canonical_text() const {
    std::string text;
    for (const auto& [k, v] : to_key_values()) text += k + " = " + v + "\n";
    return text;
  }

  /// Field-level checks shared by all experiments; experiment-specific
  /// preconditions are checked by the experiment itself.
  void validate() const {
    const auto need = [](bool ok, const char* field, const std::string& what) {
      detail::require(ok, ErrorKind::configuration, std::string("field '") + field + "': " + what);
    };
    need(n >= 1, "n", "must be >= 1");
    need(m >= 1, "m", "must be >= 1");
    need(blocks >= 1, "blocks", "must be >= 1");
    need(trials >= 1, "trials", "must be >= 1");
    need(samples >= 2, "samples", "must be >= 2");
    need(table_points >= 2, "table_points", "must be >= 2");
    need(expectation_samples >= 2, "expectation_samples", "must be >= 2");
    need(max_iters >= 1, "max_iters", "must be >= 1");
    need(residual_tol > 0.0, "residual_tol", "must be > 0");
    need(success_tol > 0.0, "success_tol", "must be > 0");
    need(min_success_rate >= 0.0 && min_success_rate <= 1.0, "min_success_rate", "must be in [0, 1]");
    // The expectation check also accepts theta = 0 (x orthogonal to z).
    const double theta_floor = experiment == "expectation" ? -1e-12 : 0.0;
    for (double t : thetas)
      need(t > theta_floor && t <= std::numbers::pi / 2.0 + 1e-12, "thetas", "angles must lie in (0, pi/2]");
    for (double r : ratio_list) need(r > 0.0, "ratio_list", "ratios must be > 0");
    for (double s : sigma_diag) need(s > 0.0, "sigma_diag", "entries must be > 0");
    for (auto v : n_list) need(v >= 1, "n_list", "entries must be >= 1");
    for (auto v : b_list) need(v >= 1, "b_list", "entries must be >= 1");
  }
};

}  // namespace altmin
