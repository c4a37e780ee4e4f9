#pragma once

// Command-line front end:
//
//   altmin <step-map|h-curve|expectation|recovery|all> [--config PATH]
//          [--seed U64] [--out DIR] [--set key=value ...] [--threads N]
//
// Exit codes: 0 success, 1 an acceptance check failed, 2 usage,
// configuration or I/O error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "altmin/config.hpp"
#include "altmin/error.hpp"
#include "altmin/experiments.hpp"
#include "altmin/io.hpp"

namespace altmin {

inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_usage = 2;

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  std::vector<std::string> overrides;
};

/// Defaults for `name`, then the config file, then --set overrides, then
/// the dedicated flags.
inline ExperimentConfig resolve_config(const std::string& name, const CliOptions& opts) {
  ExperimentConfig cfg = ExperimentConfig::defaults(name);
  if (!opts.config_path.empty()) {
    auto kv = parse_key_values(read_text_file(opts.config_path));
    kv.erase("experiment");
    cfg.apply(kv);
  }
  for (const auto& item : opts.overrides) {
    const auto eq = item.find('=');
    detail::require(eq != std::string::npos, ErrorKind::configuration,
                    "--set expects key=value, got '" + item + "'");
    cfg.set(detail::trim(std::string_view(item).substr(0, eq)), detail::trim(std::string_view(item).substr(eq + 1)));
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.out) cfg.out = *opts.out;
  if (opts.threads) cfg.threads = *opts.threads;
  cfg.validate();
  return cfg;
}

inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Batched alternating minimization for phase retrieval: simulations and theory checks", "altmin"};
  app.require_subcommand(1);

  CliOptions opts;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "master seed");
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--set", opts.overrides, "override a configuration field (key=value), repeatable");
    sub->add_option("--threads", opts.threads, "worker threads (0 = all cores)");
  };

  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("step-map", "one-step angle map: observed quantiles vs prediction"));
  subs.push_back(app.add_subcommand("h-curve", "tabulate h and h' and check the growth condition"));
  subs.push_back(app.add_subcommand("expectation", "Monte-Carlo check of the expectation of g_i(x)"));
  subs.push_back(app.add_subcommand("recovery", "success-rate sweep of the batched solver"));
  subs.push_back(app.add_subcommand("all", "run every experiment into <out>/<experiment>/"));
  for (auto* sub : subs) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  std::string chosen;
  for (auto* sub : subs)
    if (sub->parsed()) chosen = sub->get_name();

  try {
    std::vector<std::string> names;
    if (chosen == "all") names = experiment_names();
    else names.push_back(chosen);

    bool all_pass = true;
    for (const auto& name : names) {
      ExperimentConfig cfg = resolve_config(name, opts);
      if (chosen == "all") cfg.out = cfg.out / name;
      const auto outcome = run_experiment(cfg);
      out << name << ": " << (outcome.pass ? "pass" : "FAIL") << " -> " << cfg.out.string() << '\n';
      all_pass = all_pass && outcome.pass;
    }
    return all_pass ? exit_ok : exit_check_failed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, out, err);
}

}  // namespace altmin
