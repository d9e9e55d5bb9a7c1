/*
Copyright 2026 The laxoc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

     https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "laxoc/cli/commands.hpp"
#include "laxoc/cli/config.hpp"
#include "laxoc/csv.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace laxoc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("laxoc_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const json& j) {
    const auto path = dir_ / "config.json";
    std::ofstream(path) << j.dump();
    return path.string();
  }

  int run(const std::string& args) {
    const std::string cmd = std::string(LAXOC_CLI_PATH) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  }

  json read_json(const std::string& name) {
    std::ifstream in(dir_ / "out" / name);
    return json::parse(in);
  }

  std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path out() const { return dir_ / "out"; }

  fs::path dir_;
};

TEST(ParseConfig, DefaultsAndRejection) {
  const auto c = parse_config(R"({"problem": "vehicle2d"})");
  EXPECT_EQ(c.K, 100);
  EXPECT_EQ(c.substeps, 10);
  EXPECT_EQ(c.decomposition, DecomposeMode::kClosedForm);
  EXPECT_FALSE(c.mitigate.has_value());
  EXPECT_EQ(c.K_list, (std::vector<int>{25, 50, 100, 200}));
  EXPECT_THROW(parse_config(R"({"problem": "vehicle2d", "Kay": 3})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"problem": "vehicle2d", "solver": {"tol": 1}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"problem": "nope"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"problem": "vehicle2d", "K_list": [50, 25]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"problem": "vehicle2d", "overrides": {"mass": 1}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"problem": "vehicle2d", "mitigate": "sometimes"})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  const auto d = parse_config(R"({"problem": "gear4d", "seed": 9, "mitigate": "max_likelihood",
                                  "solver": {"algorithm": "augmented_lagrangian"}})");
  EXPECT_EQ(d.solver.random_seed, 9u);
  EXPECT_EQ(d.solver.algorithm, SolverAlgorithm::kAugmentedLagrangian);
  EXPECT_EQ(*d.mitigate, MitigationMode::kMaxLikelihood);
}

TEST_F(CliTest, SolveVehicleWritesArtifacts) {
  const auto cfg = write_config({{"problem", "vehicle2d"}, {"K", 100}});
  ASSERT_EQ(run("solve --config " + cfg + " --out " + out().string()), 0);
  const auto summary = read_json("summary.json");
  EXPECT_NEAR(summary["objective"].get<double>(), 0.1180, 1e-3);
  EXPECT_EQ(summary["status"], "converged");
  EXPECT_EQ(summary["convexity"]["condition2"], "pass");

  const auto lax = read_csv((out() / "lax_trajectory.csv").string());
  EXPECT_EQ(lax.size(), 101u);
  const auto rollout = read_csv((out() / "rollout.csv").string());
  const int pieces = summary["rollout"]["pieces"].get<int>();
  EXPECT_EQ(rollout.size(), static_cast<std::size_t>(pieces * 10 + 1));
  EXPECT_EQ(read_csv((out() / "control.csv").string()).size(), static_cast<std::size_t>(2 * pieces));

  // identical config and seed reproduce the summary byte for byte
  const auto first = read_text(out() / "summary.json");
  ASSERT_EQ(run("solve --config " + cfg + " --out " + out().string()), 0);
  EXPECT_EQ(read_text(out() / "summary.json"), first);
}

TEST_F(CliTest, SolveGearReportsTheSpeedLimit) {
  const auto cfg = write_config({{"problem", "gear4d"}, {"K", 100}});
  ASSERT_EQ(run("solve --config " + cfg + " --out " + out().string()), 0);
  EXPECT_LE(read_json("summary.json")["max_abs_x2"].get<double>(), 0.1 + 1e-6);
}

TEST_F(CliTest, SolveFormationWithMitigationEmitsAgents) {
  const auto cfg = write_config({{"problem", "formation12d"}, {"K", 200}});
  ASSERT_EQ(run("solve --config " + cfg + " --out " + out().string() + " --mitigate max_likelihood"), 0);
  for (int l = 1; l <= 3; ++l) {
    const auto tag = "agent" + std::to_string(l);
    EXPECT_EQ(read_csv((out() / (tag + "_lax.csv")).string()).size(), 201u);
    EXPECT_TRUE(fs::exists(out() / (tag + "_rollout.csv")));
  }
  const auto summary = read_json("summary.json");
  EXPECT_EQ(summary["mitigation"]["certified"], false);
  EXPECT_EQ(summary["mitigation"]["mode"], "max_likelihood");
}

TEST_F(CliTest, OracleModes) {
  const auto brute = write_config({{"problem", "vehicle2d"}, {"oracle", {{"mode", "brute"}, {"K", 8}}}});
  ASSERT_EQ(run("oracle --config " + brute + " --out " + out().string()), 0);
  const auto report = read_json("oracle.json");
  EXPECT_TRUE(report["pass"].get<bool>());
  EXPECT_LE(report["lax"].get<double>(), report["oracle"].get<double>() + 1e-4);

  const auto hjb = write_config({{"problem", "formation12d"}, {"oracle", {{"mode", "hjb"}}}});
  EXPECT_EQ(run("oracle --config " + hjb + " --out " + out().string()), 3);
  const auto big = write_config({{"problem", "vehicle2d"}, {"oracle", {{"mode", "brute"}, {"K", 9}}}});
  EXPECT_EQ(run("oracle --config " + big + " --out " + out().string()), 3);
}

TEST_F(CliTest, ConvergenceTables) {
  const auto one = write_config({{"problem", "vehicle2d"}, {"K_list", {40}}});
  ASSERT_EQ(run("convergence --config " + one + " --out " + out().string()), 0);
  std::vector<std::string> header;
  const auto rows = read_csv((out() / "convergence.csv").string(), &header);
  EXPECT_EQ(rows.size(), 1u);
  EXPECT_EQ(header, (std::vector<std::string>{"K", "delta", "objective", "sup_gap", "cost_gap", "switch_count"}));

  const auto gear = write_config({{"problem", "gear4d"}, {"K_list", {10, 20, 40}}});
  ASSERT_EQ(run("convergence --config " + gear + " --out " + out().string()), 0);
  EXPECT_EQ(read_csv((out() / "convergence.csv").string()).size(), 3u);
}

TEST_F(CliTest, ErrorsMapToExitCodes) {
  const auto bad = write_config({{"problem", "vehicle2d"}, {"unknown_key", 1}});
  EXPECT_EQ(run("solve --config " + bad), 3);
  const auto good = write_config({{"problem", "vehicle2d"}});
  EXPECT_EQ(run("solve --config " + good + " --mitigate sometimes --out " + out().string()), 3);
  EXPECT_EQ(run("solve --config " + good + " --k 0 --out " + out().string()), 3);
  EXPECT_EQ(run("solve"), 3);
  EXPECT_EQ(run("list-problems"), 0);
  // an iteration budget of one cannot converge
  const auto starved = write_config({{"problem", "gear4d"}, {"solver", {{"max_iterations", 1}}}});
  EXPECT_EQ(run("solve --config " + starved + " --out " + out().string()), 2);
}

}  // namespace
}  // namespace laxoc::cli
