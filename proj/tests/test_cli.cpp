#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "altmin/cli.hpp"

using namespace altmin;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("altmin_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  const auto bad_flag = run({"h-curve", "--bogus"});
  EXPECT_EQ(bad_flag.code, exit_usage);
  EXPECT_NE(bad_flag.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).code, exit_usage);
  EXPECT_EQ(run({}).code, exit_usage);
  EXPECT_EQ(run({"recovery", "--seed", "abc"}).code, exit_usage);
  EXPECT_EQ(run({"recovery", "--config", "/nonexistent/file.cfg"}).code, exit_usage);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const auto unknown = run({"recovery", "--set", "bogus=1", "--out", scratch("unknown").string()});
  EXPECT_EQ(unknown.code, exit_usage);
  EXPECT_NE(unknown.err.find("bogus"), std::string::npos);
  EXPECT_EQ(run({"recovery", "--set", "trials", "--out", scratch("noeq").string()}).code, exit_usage);
  EXPECT_EQ(run({"step-map", "--set", "thetas=2.5", "--out", scratch("theta").string()}).code, exit_usage);
}

TEST(Cli, HelpExitsZero) {
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, exit_ok);
  EXPECT_NE(help.out.find("step-map"), std::string::npos);
}

TEST(Cli, RecoveryPassAndFail) {
  const auto dir = scratch("recovery");
  const auto ok = run({"recovery", "--out", dir.string(), "--set", "n_list=8", "--set", "ratio_list=64", "--set",
                       "b_list=2", "--set", "trials=5"});
  EXPECT_EQ(ok.code, exit_ok) << ok.err;
  EXPECT_TRUE(fs::exists(dir / "recovery.csv"));
  EXPECT_TRUE(fs::exists(dir / "recovery.gp"));
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));

  const auto bad = run({"recovery", "--out", scratch("recovery_fail").string(), "--set", "n_list=16", "--set",
                        "ratio_list=1", "--set", "b_list=1", "--set", "trials=5", "--set", "max_iters=20"});
  EXPECT_EQ(bad.code, exit_check_failed) << bad.err;
  fs::remove_all(dir);
}

TEST(Cli, SameSeedSameOutputs) {
  const auto a = scratch("seed_a"), b = scratch("seed_b");
  for (const auto& dir : {a, b}) {
    run({"h-curve", "--seed", "7", "--out", dir.string(), "--set", "samples=20000", "--set", "table_points=17"});
  }
  ASSERT_TRUE(fs::exists(a / "h_table.csv"));
  EXPECT_EQ(read_text_file(a / "h_table.csv"), read_text_file(b / "h_table.csv"));
  EXPECT_EQ(read_text_file(a / "growth.json"), read_text_file(b / "growth.json"));
  const auto manifest = nlohmann::json::parse(read_text_file(a / "manifest.json"));
  EXPECT_EQ(manifest["master_seed"], 7);
  EXPECT_EQ(manifest["config"]["samples"], "20000");
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, ConfigLayering) {
  const auto dir = scratch("layers");
  fs::create_directories(dir);
  write_text_file(dir / "run.cfg", "experiment = step-map\nn_list = 8\nratio_list = 64\nb_list = 2\ntrials = 9\nseed = 3\n");

  CliOptions opts;
  opts.config_path = (dir / "run.cfg").string();
  opts.overrides = {"trials=4"};
  opts.seed = 11;
  const auto cfg = resolve_config("recovery", opts);
  EXPECT_EQ(cfg.experiment, "recovery");
  EXPECT_EQ(cfg.trials, 4u);
  EXPECT_EQ(cfg.seed, 11u);
  EXPECT_EQ(cfg.n_list, (std::vector<std::size_t>{8}));

  const auto r = run({"recovery", "--config", (dir / "run.cfg").string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, exit_ok) << r.err;
  const auto manifest = nlohmann::json::parse(read_text_file(dir / "out" / "manifest.json"));
  EXPECT_EQ(manifest["config"]["trials"], "9");
  EXPECT_EQ(manifest["master_seed"], 3);
  fs::remove_all(dir);
}

TEST(Cli, StepMapDefaultsDocumented) {
  const auto cfg = resolve_config("step-map", CliOptions{});
  EXPECT_EQ(cfg.n, 64u);
  EXPECT_EQ(cfg.m, 4096u);
  EXPECT_EQ(cfg.thetas.size(), 16u);
  EXPECT_EQ(cfg.trials, 1000u);
}
