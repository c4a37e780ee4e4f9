#pragma once

// Simulation experiments and their CSV / JSON artifacts.
//
// Every trial draws from its own stream derived from (master seed,
// experiment tag, cell index, trial index), and results are stored by
// index, so outputs do not depend on thread count or scheduling.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "altmin/altmin_ops.hpp"
#include "altmin/config.hpp"
#include "altmin/error.hpp"
#include "altmin/h_oracle.hpp"
#include "altmin/io.hpp"
#include "altmin/measurement.hpp"
#include "altmin/metrics.hpp"
#include "altmin/parallel.hpp"
#include "altmin/rng.hpp"
#include "altmin/solver.hpp"
#include "altmin/stats.hpp"

namespace altmin {

namespace stream_tag {
inline constexpr std::uint64_t table = 1;
inline constexpr std::uint64_t step_map = 2;
inline constexpr std::uint64_t expectation = 3;
inline constexpr std::uint64_t recovery = 4;
inline constexpr std::uint64_t spread = 5;
}  // namespace stream_tag

inline RngStream root_stream(const ExperimentConfig& cfg) { return RngStream(cfg.seed, 0); }

/// Table used for predictions: uniform grid of cfg.table_points angles,
/// cfg.samples draws per point.
inline HTable default_htable(const ExperimentConfig& cfg) {
  return build_htable(uniform_angle_grid(cfg.table_points), cfg.samples,
                      root_stream(cfg).child(stream_tag::table), cfg.threads);
}

/// Unit z and unit x with theta(x) = angle: x = sin(angle) z + cos(angle) w, w a unit vector orthogonal to z.
struct AnglePair {
  Signal z;
  Signal w;
  Signal x;
};

inline AnglePair draw_angle_pair(Index n, double angle, Rng& rng) {
  detail::require(n >= 2, ErrorKind::dimension, "need n >= 2 to place x at a prescribed angle");
  const Signal z = random_unit(n, rng);
  CVector w = complex_normal_vector(n, rng);
  w -= z.values().dot(w) * z.values();
  w.normalize();
  Signal wsig(std::move(w));
  Signal x(std::sin(angle) * z.values() + std::cos(angle) * wsig.values());
  return {z, wsig, x};
}

// --- one-step angle map -----------------------------------------------------

struct QuantileRow {
  double theta_in = 0.0;
  double q10 = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double predicted = 0.0;
  std::size_t trials = 0;
  double min_observed = 0.0;
  double max_observed = 0.0;
};

struct StepMapResult {
  std::vector<QuantileRow> rows;
  std::size_t q50_inversions = 0;  // decreases of q50 between consecutive checked angles
  bool pass = false;
  std::vector<std::string> failures;
};

/// Observed theta(T(x)) over `trials` fresh ensembles, x at angle theta from z.
inline std::vector<double> observe_step_angles(std::size_t n, std::size_t m, double angle, std::size_t trials,
                                               const RngStream& cell, std::size_t threads) {
  std::vector<double> observed(trials);
  parallel_for(
      trials,
      [&](std::size_t t) {
        Rng rng = cell.child(t).engine();
        const auto pair = draw_angle_pair(static_cast<Index>(n), angle, rng);
        const auto a = sample_sensing(static_cast<Index>(m), static_cast<Index>(n), rng);
        const auto y = observe(a, pair.z);
        observed[t] = theta(altmin_step(a, y, pair.x), pair.z);
      },
      threads);
  return observed;
}

inline QuantileRow summarize_angles(double theta_in, const std::vector<double>& observed, double predicted) {
  QuantileRow row;
  row.theta_in = theta_in;
  row.q10 = quantile(observed, 0.1);
  row.q50 = quantile(observed, 0.5);
  row.q90 = quantile(observed, 0.9);
  row.predicted = predicted;
  row.trials = observed.size();
  row.min_observed = *std::min_element(observed.begin(), observed.end());
  row.max_observed = *std::max_element(observed.begin(), observed.end());
  return row;
}

inline StepMapResult exp_step_map(const ExperimentConfig& cfg, const HTable& table) {
  cfg.validate();
  detail::require(cfg.m >= 2 * cfg.n, ErrorKind::configuration, "field 'm': step-map needs m >= 2n");
  detail::require(cfg.n >= 2, ErrorKind::configuration, "field 'n': step-map needs n >= 2");
  detail::require(!cfg.thetas.empty(), ErrorKind::configuration, "field 'thetas': empty grid");

  StepMapResult result;
  const RngStream root = root_stream(cfg).child(stream_tag::step_map);
  for (std::size_t j = 0; j < cfg.thetas.size(); ++j) {
    const double th = cfg.thetas[j];
    const auto observed = observe_step_angles(cfg.n, cfg.m, th, cfg.trials, root.child(j), cfg.threads);
    result.rows.push_back(summarize_angles(th, observed, predicted_theta_next(th, table)));
  }

  for (const auto& row : result.rows) {
    if (std::abs(row.theta_in - half_pi) <= 1e-12) {
      const double dev = std::max(std::abs(row.min_observed - half_pi), std::abs(row.max_observed - half_pi));
      if (dev > cfg.fixed_point_tol)
        result.failures.push_back("theta=pi/2: observed angle deviates by " + format_double(dev));
    } else if (row.theta_in >= cfg.check_lo && row.theta_in <= cfg.check_hi) {
      const double gap = std::abs(row.q50 - row.predicted);
      if (gap > cfg.q50_tol)
        result.failures.push_back("theta=" + format_double(row.theta_in) + ": |q50 - predicted| = " + format_double(gap));
    }
  }
  // The median map should be nondecreasing; one inversion is tolerated as MC noise.
  const QuantileRow* prev = nullptr;
  for (const auto& row : result.rows) {
    if (row.theta_in < cfg.check_lo || row.theta_in > cfg.check_hi) continue;
    if (prev && row.theta_in > prev->theta_in && row.q50 < prev->q50) ++result.q50_inversions;
    prev = &row;
  }
  if (result.q50_inversions > 1)
    result.failures.push_back("q50 decreases " + std::to_string(result.q50_inversions) + " times on the checked range");
  result.pass = result.failures.empty();
  return result;
}

inline StepMapResult exp_step_map(const ExperimentConfig& cfg) { return exp_step_map(cfg, default_htable(cfg)); }

struct SpreadResult {
  double theta = 0.0;
  std::size_t m_small = 0;
  std::size_t m_large = 0;
  double spread_small = 0.0;  // q90 - q10
  double spread_large = 0.0;
  double ratio = 0.0;         // spread_large / spread_small
};

/// Spread of theta(T(x)) at two sample sizes; ~1/sqrt(m) scaling gives
/// ratio ~ sqrt(m_small / m_large).
inline SpreadResult exp_spread_scaling(const ExperimentConfig& cfg, double angle, std::size_t m_small,
                                       std::size_t m_large) {
  cfg.validate();
  const RngStream root = root_stream(cfg).child(stream_tag::spread);
  const auto small = observe_step_angles(cfg.n, m_small, angle, cfg.trials, root.child(0), cfg.threads);
  const auto large = observe_step_angles(cfg.n, m_large, angle, cfg.trials, root.child(1), cfg.threads);
  SpreadResult r;
  r.theta = angle;
  r.m_small = m_small;
  r.m_large = m_large;
  r.spread_small = quantile(small, 0.9) - quantile(small, 0.1);
  r.spread_large = quantile(large, 0.9) - quantile(large, 0.1);
  r.ratio = r.spread_large / r.spread_small;
  return r;
}

// --- h curve ----------------------------------------------------------------

struct HCurveResult {
  HTable table;
  GrowthReport growth;
  McEstimate h_at_half_pi;
  bool h_half_pi_pass = false;
  bool pass = false;
};

inline HCurveResult exp_hcurve(const ExperimentConfig& cfg) {
  cfg.validate();
  detail::require(cfg.samples >= 10'000, ErrorKind::configuration, "field 'samples': h-curve needs >= 1e4 samples");
  HCurveResult r;
  r.table = default_htable(cfg);
  r.growth = verify_growth_condition(r.table, cfg.confidence_z);
  r.h_at_half_pi = {r.table.h.back(), r.table.h_se.back(), r.table.samples};
  r.h_half_pi_pass = std::abs(r.h_at_half_pi.value - 1.0) <= cfg.confidence_z * r.h_at_half_pi.std_error;
  r.pass = r.growth.pass && r.growth.interior_pass && r.h_half_pi_pass;
  return r;
}

// --- expectation of g_i -----------------------------------------------------

struct ExpectationRow {
  double theta = 0.0;
  double eta = 0.0;
  double coef_x = 0.0;  // Re x^* mean(g_i)
  double coef_d = 0.0;  // Re d^* mean(g_i)
  double coef_x_imag = 0.0;
  double coef_d_imag = 0.0;
  double coef_x_se = 0.0;
  double coef_d_se = 0.0;
  double coef_x_imag_se = 0.0;
  double coef_d_imag_se = 0.0;
  double expected_coef_x = 0.0;  // h(theta)
  double expected_coef_d = 0.0;  // h'(theta)
  double expected_coef_x_se = 0.0;
  double expected_coef_d_se = 0.0;
  double orth_residual = 0.0;  // norm of the mean component orthogonal to span(x, d)
  double orth_se = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

struct ExpectationResult {
  std::vector<ExpectationRow> rows;
  bool pass = false;
};

/// Monte-Carlo mean of g_i(x) = |a^*z| (a^*x/|a^*x|) a for one measurement
/// a ~ CN(0, I), decomposed on x, d and their orthogonal complement.
inline ExpectationRow expectation_cell(std::size_t n, double angle, double eta, std::size_t samples,
                                       const RngStream& stream) {
  Rng rng = stream.engine();
  const auto pair = draw_angle_pair(static_cast<Index>(n), 0.0, rng);  // reuse z, w; x built below
  const Complex rot = std::polar(1.0, eta);
  const CVector& z = pair.z.values();
  const CVector& w = pair.w.values();
  const CVector x = std::sin(angle) * rot * z + std::cos(angle) * w;
  const CVector d = std::cos(angle) * rot * z - std::sin(angle) * w;

  MeanAccumulator cx_re, cx_im, cd_re, cd_im;
  CVector r_sum = CVector::Zero(static_cast<Index>(n));
  RVector r_sq = RVector::Zero(static_cast<Index>(n));
  CVector a(static_cast<Index>(n));
  for (std::size_t s = 0; s < samples; ++s) {
    for (Index j = 0; j < a.size(); ++j) a(j) = rng.complex_normal();
    const Complex ax = a.dot(x);  // a^* x
    const double mag = std::abs(ax);
    const Complex phase = mag > 0.0 ? ax / mag : Complex(1.0, 0.0);
    const CVector g = (std::abs(a.dot(z)) * phase) * a;
    const Complex cx = x.dot(g);
    const Complex cd = d.dot(g);
    const CVector r = g - cx * x - cd * d;
    cx_re.add(cx.real());
    cx_im.add(cx.imag());
    cd_re.add(cd.real());
    cd_im.add(cd.imag());
    r_sum += r;
    r_sq += r.cwiseAbs2();
  }

  ExpectationRow row;
  row.theta = angle;
  row.eta = eta;
  row.samples = samples;
  const auto ex = cx_re.estimate(), exi = cx_im.estimate(), ed = cd_re.estimate(), edi = cd_im.estimate();
  row.coef_x = ex.value;
  row.coef_x_se = ex.std_error;
  row.coef_x_imag = exi.value;
  row.coef_x_imag_se = exi.std_error;
  row.coef_d = ed.value;
  row.coef_d_se = ed.std_error;
  row.coef_d_imag = edi.value;
  row.coef_d_imag_se = edi.std_error;

  const double ns = static_cast<double>(samples);
  const CVector r_mean = r_sum / ns;
  row.orth_residual = r_mean.norm();
  double var_total = 0.0;
  for (Index j = 0; j < r_mean.size(); ++j)
    var_total += std::max(0.0, (r_sq(j) - ns * std::norm(r_mean(j))) / (ns - 1.0));
  row.orth_se = std::sqrt(var_total / ns);
  return row;
}

inline ExpectationResult exp_expectation_check(const ExperimentConfig& cfg, const HTable& table) {
  cfg.validate();
  detail::require(cfg.n >= 2, ErrorKind::configuration, "field 'n': expectation check needs n >= 2");
  detail::require(!cfg.thetas.empty() && !cfg.etas.empty(), ErrorKind::configuration,
                  "field 'thetas'/'etas': empty grid");
  const RngStream root = root_stream(cfg).child(stream_tag::expectation);

  ExpectationResult result;
  result.rows.resize(cfg.thetas.size() * cfg.etas.size());
  parallel_for(
      result.rows.size(),
      [&](std::size_t cell) {
        const double th = cfg.thetas[cell / cfg.etas.size()];
        const double eta = cfg.etas[cell % cfg.etas.size()];
        result.rows[cell] = expectation_cell(cfg.n, th, eta, cfg.expectation_samples, root.child(cell));
      },
      cfg.threads);

  result.pass = true;
  for (auto& row : result.rows) {
    const auto expected = interpolate(table, row.theta);
    row.expected_coef_x = expected.h;
    row.expected_coef_d = expected.h_prime;
    // Standard errors of the nearest table point; grid tables used here contain the angle exactly.
    const auto nearest = static_cast<std::size_t>(
        std::min_element(table.thetas.begin(), table.thetas.end(),
                         [&](double a, double b) { return std::abs(a - row.theta) < std::abs(b - row.theta); }) -
        table.thetas.begin());
    row.expected_coef_x_se = table.h_se[nearest];
    row.expected_coef_d_se = table.h_prime_se[nearest];

    const double z = cfg.coef_z;
    const auto within = [z](double got, double want, double se_a, double se_b) {
      return std::abs(got - want) <= z * std::hypot(se_a, se_b);
    };
    row.pass = within(row.coef_x, row.expected_coef_x, row.coef_x_se, row.expected_coef_x_se) &&
               within(row.coef_d, row.expected_coef_d, row.coef_d_se, row.expected_coef_d_se) &&
               within(row.coef_x_imag, 0.0, row.coef_x_imag_se, 0.0) &&
               within(row.coef_d_imag, 0.0, row.coef_d_imag_se, 0.0) && row.orth_residual <= z * row.orth_se;
    result.pass = result.pass && row.pass;
  }
  return result;
}

/// Builds the reference table on exactly the configured angles.
inline ExpectationResult exp_expectation_check(const ExperimentConfig& cfg) {
  std::vector<double> grid = cfg.thetas;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return exp_expectation_check(cfg, build_htable(grid, cfg.samples, root_stream(cfg).child(stream_tag::table),
                                                 cfg.threads));
}

// --- recovery sweep ---------------------------------------------------------

struct RecoveryRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t blocks = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double median_iters = 0.0;
  double median_seconds = std::numeric_limits<double>::quiet_NaN();
};

struct RecoveryResult {
  std::vector<RecoveryRow> rows;
  bool pass = false;
};

inline std::optional<CovarianceSpec> recovery_covariance(const ExperimentConfig& cfg, std::size_t n) {
  if (cfg.sigma_diag.empty()) return std::nullopt;
  detail::require(cfg.sigma_diag.size() <= n, ErrorKind::configuration,
                  "field 'sigma_diag': more entries than n=" + std::to_string(n));
  std::vector<double> diag(n, 1.0);
  std::copy(cfg.sigma_diag.begin(), cfg.sigma_diag.end(), diag.begin());
  return CovarianceSpec::diagonal(diag);
}

struct TrialOutcome {
  bool success = false;
  std::size_t iterations = 0;
  double seconds = 0.0;
};

/// One recovery trial: draws z, A (identity or given covariance) and runs the batched solver.
inline TrialOutcome recovery_trial(std::size_t n, std::size_t m, const SolverConfig& solver,
                                   const std::optional<CovarianceSpec>& cov, double success_tol,
                                   const RngStream& stream) {
  Rng rng = stream.child(0).engine();
  const Signal z = sample_signal(static_cast<Index>(n), false, rng);
  const SensingEnsemble a = cov ? sample_sensing_cov(static_cast<Index>(m), *cov, rng)
                                : sample_sensing(static_cast<Index>(m), static_cast<Index>(n), rng);
  const Observations y = observe(a, z);
  const auto start = std::chrono::steady_clock::now();
  const RunResult run = run_batched(a, y, solver, stream.child(1));
  const auto stop = std::chrono::steady_clock::now();
  return {success(run.estimate, z, success_tol), run.iterations,
          std::chrono::duration<double>(stop - start).count()};
}

inline RecoveryResult exp_recovery(const ExperimentConfig& cfg) {
  cfg.validate();
  detail::require(!cfg.n_list.empty() && !cfg.ratio_list.empty() && !cfg.b_list.empty(), ErrorKind::configuration,
                  "fields 'n_list', 'ratio_list', 'b_list' must be non-empty");
  const RngStream root = root_stream(cfg).child(stream_tag::recovery);

  RecoveryResult result;
  result.pass = true;
  std::size_t cell = 0;
  for (std::size_t n : cfg.n_list) {
    const auto cov = recovery_covariance(cfg, n);
    for (double ratio : cfg.ratio_list) {
      const auto m = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
      for (std::size_t b : cfg.b_list) {
        detail::require(m >= b * n, ErrorKind::configuration,
                        "cell n=" + std::to_string(n) + " m=" + std::to_string(m) + " B=" + std::to_string(b) +
                            ": blocks would have fewer than n rows");
        SolverConfig solver;
        solver.blocks = b;
        solver.max_iters = cfg.max_iters;
        solver.residual_tol = cfg.residual_tol;

        std::vector<TrialOutcome> outcomes(cfg.trials);
        const RngStream cell_stream = root.child(cell);
        parallel_for(
            cfg.trials,
            [&](std::size_t t) {
              outcomes[t] = recovery_trial(n, m, solver, cov, cfg.success_tol, cell_stream.child(t));
            },
            cfg.threads);

        RecoveryRow row;
        row.n = n;
        row.m = m;
        row.blocks = b;
        row.trials = cfg.trials;
        std::vector<double> iters, secs;
        std::size_t wins = 0;
        for (const auto& o : outcomes) {
          wins += o.success ? 1 : 0;
          iters.push_back(static_cast<double>(o.iterations));
          secs.push_back(o.seconds);
        }
        row.success_rate = static_cast<double>(wins) / static_cast<double>(cfg.trials);
        row.median_iters = median(iters);
        if (cfg.timing) row.median_seconds = median(secs);
        if (row.success_rate < cfg.min_success_rate) result.pass = false;
        result.rows.push_back(row);
        ++cell;
      }
    }
  }
  return result;
}

// --- artifacts --------------------------------------------------------------

inline std::string step_map_csv(const StepMapResult& r) {
  std::ostringstream out;
  out << "theta_in,q10,q50,q90,predicted,trials\n";
  for (const auto& row : r.rows)
    out << format_double(row.theta_in) << ',' << format_double(row.q10) << ',' << format_double(row.q50) << ','
        << format_double(row.q90) << ',' << format_double(row.predicted) << ',' << row.trials << '\n';
  return out.str();
}

inline std::string h_table_csv(const HTable& t) {
  std::ostringstream out;
  t.write_csv(out);
  return out.str();
}

inline std::string expectation_csv(const ExpectationResult& r) {
  std::ostringstream out;
  out << "theta,eta,coef_x,coef_d,expected_coef_x,expected_coef_d,orth_residual,samples\n";
  for (const auto& row : r.rows)
    out << format_double(row.theta) << ',' << format_double(row.eta) << ',' << format_double(row.coef_x) << ','
        << format_double(row.coef_d) << ',' << format_double(row.expected_coef_x) << ','
        << format_double(row.expected_coef_d) << ',' << format_double(row.orth_residual) << ',' << row.samples
        << '\n';
  return out.str();
}

inline std::string recovery_csv(const RecoveryResult& r) {
  std::ostringstream out;
  out << "n,m,B,trials,success_rate,median_iters,median_seconds\n";
  for (const auto& row : r.rows)
    out << row.n << ',' << row.m << ',' << row.blocks << ',' << row.trials << ',' << format_double(row.success_rate)
        << ',' << format_double(row.median_iters) << ',' << format_double(row.median_seconds) << '\n';
  return out.str();
}

inline nlohmann::json growth_json(const GrowthReport& g) {
  return {
      {"confidence_z", g.confidence_z},
      {"min_ratio", g.min_ratio},
      {"min_ratio_lower", g.min_ratio_lower},
      {"min_ratio_upper", g.min_ratio_upper},
      {"min_ratio_theta", g.min_ratio_theta},
      {"min_h_prime_lower", g.min_h_prime_lower},
      {"min_h_prime_lower_theta", g.min_h_prime_lower_theta},
      {"min_h", g.min_h},
      {"min_h_se", g.min_h_se},
      {"min_h_theta", g.min_h_theta},
      {"lipschitz_interval", {g.lipschitz_lo, g.lipschitz_hi}},
      {"lipschitz_min_h_prime_lower", g.lipschitz_min_h_prime_lower},
      {"lipschitz_points", g.lipschitz_points},
      {"interior_pass", g.interior_pass},
      {"pass", g.pass},
  };
}

inline constexpr const char* step_map_gnuplot = R"(# gnuplot script: observed quantiles of theta(T(x)) against the prediction
set datafile separator ','
set key autotitle columnhead left top
set xlabel 'theta(x)'
set ylabel 'theta(T(x))'
plot 'step_map.csv' using 1:2:4 with filledcurves lc rgb '#cccccc' title '10%-90%', \
     '' using 1:3 with linespoints title 'median', \
     '' using 1:5 with lines dt 2 title 'predicted', \
     x with lines lc rgb 'black' title 'identity'
)";

inline constexpr const char* h_curve_gnuplot = R"(# gnuplot script: h(theta) and h'(theta)
set datafile separator ','
set key autotitle columnhead
set multiplot layout 1,2
set xlabel 'theta'
plot 'h_table.csv' using 1:2:3 with yerrorlines title 'h'
plot 'h_table.csv' using 1:4:5 with yerrorlines title "h'", 0 with lines lc rgb 'black' notitle
unset multiplot
)";

inline constexpr const char* recovery_gnuplot = R"(# gnuplot script: success rate against oversampling m/n
set datafile separator ','
set key autotitle columnhead
set xlabel 'm/n'
set ylabel 'success rate'
set yrange [0:1.05]
plot 'recovery.csv' using ($2/$1):5 with linespoints title 'success rate'
)";

struct ExperimentOutcome {
  std::string experiment;
  bool pass = false;
  std::vector<std::filesystem::path> files;
  nlohmann::json manifest;
};

/// Runs one experiment and writes its CSV, plot script and manifest.json
/// into cfg.out.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ensure_directory(cfg.out);
  const auto started_at = utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentOutcome outcome;
  outcome.experiment = cfg.experiment;
  nlohmann::json details;
  const auto emit = [&](const std::string& name, const std::string& text) {
    write_text_file(cfg.out / name, text);
    outcome.files.push_back(cfg.out / name);
  };

  if (cfg.experiment == "step-map") {
    const auto r = exp_step_map(cfg);
    emit("step_map.csv", step_map_csv(r));
    emit("step_map.gp", step_map_gnuplot);
    outcome.pass = r.pass;
    details["failures"] = r.failures;
  } else if (cfg.experiment == "h-curve") {
    const auto r = exp_hcurve(cfg);
    emit("h_table.csv", h_table_csv(r.table));
    emit("h_curve.gp", h_curve_gnuplot);
    nlohmann::json summary = growth_json(r.growth);
    summary["h_half_pi"] = {{"value", r.h_at_half_pi.value}, {"std_error", r.h_at_half_pi.std_error},
                            {"pass", r.h_half_pi_pass}};
    summary["pass"] = r.pass;
    emit("growth.json", summary.dump(2) + "\n");
    outcome.pass = r.pass;
  } else if (cfg.experiment == "expectation") {
    const auto r = exp_expectation_check(cfg);
    emit("expectation.csv", expectation_csv(r));
    outcome.pass = r.pass;
  } else if (cfg.experiment == "recovery") {
    const auto r = exp_recovery(cfg);
    emit("recovery.csv", recovery_csv(r));
    emit("recovery.gp", recovery_gnuplot);
    outcome.pass = r.pass;
  } else {
    throw Error(ErrorKind::configuration, "unknown experiment '" + cfg.experiment + "'");
  }

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string canonical = cfg.canonical_text();
  outcome.manifest = {
      {"experiment", cfg.experiment},
      {"config", cfg.to_key_values()},
      {"master_seed", cfg.seed},
      {"input_hash", git_blob_hash(canonical)},
      {"started_at", started_at},
      {"elapsed_seconds", elapsed},
      {"pass", outcome.pass},
  };
  if (!details.empty()) outcome.manifest["details"] = details;
  emit("manifest.json", outcome.manifest.dump(2) + "\n");
  return outcome;
}

}  // namespace altmin
