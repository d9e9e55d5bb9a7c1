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

// laxoc command-line driver: solve, oracle, convergence, list-problems.

#include "laxoc/cli/commands.hpp"
#include "laxoc/cli/config.hpp"
#include "laxoc/types.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <cstdint>
#include <optional>
#include <string>

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mitigate;
  std::optional<int> k;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory (overrides output_dir)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--mitigate", o.mitigate, "switch mitigation: max_likelihood or min_residual");
  cmd->add_option("--k", o.k, "number of grid steps (overrides K)");
}

laxoc::cli::RunConfig resolve(const Overrides& o) {
  auto config = laxoc::cli::load_config(o.config_path);
  if (o.out) config.output_dir = *o.out;
  if (o.seed) {
    config.seed = *o.seed;
    config.solver.random_seed = *o.seed;
  }
  if (o.mitigate) {
    try {
      config.mitigate = laxoc::parse_mitigation_mode(*o.mitigate);
    } catch (const laxoc::InvalidArgument& e) {
      throw laxoc::cli::ConfigError(e.what());
    }
  }
  if (o.k) {
    if (*o.k < 1) throw laxoc::cli::ConfigError("--k must be at least 1");
    config.K = *o.k;
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-horizon optimal control through the generalized Lax formula"};
  app.require_subcommand(1);
  Overrides o;
  auto* solve = app.add_subcommand("solve", "solve, decompose and roll out one problem");
  auto* oracle = app.add_subcommand("oracle", "compare the Lax value with a grid or brute-force oracle");
  auto* convergence = app.add_subcommand("convergence", "sweep the grid size and tabulate gaps");
  auto* list = app.add_subcommand("list-problems", "print the built-in problems and their tunables");
  for (auto* cmd : {solve, oracle, convergence}) add_common(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : laxoc::cli::kExitConfigError;
  }

  try {
    if (list->parsed()) return laxoc::cli::cmd_list_problems(std::cout);
    const auto config = resolve(o);
    if (solve->parsed()) return laxoc::cli::cmd_solve(config, std::cout);
    if (oracle->parsed()) return laxoc::cli::cmd_oracle(config, std::cout);
    return laxoc::cli::cmd_convergence(config, std::cout);
  } catch (const laxoc::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return laxoc::cli::kExitConfigError;
  } catch (const laxoc::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return laxoc::cli::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return laxoc::cli::kExitNotConverged;
  }
}
