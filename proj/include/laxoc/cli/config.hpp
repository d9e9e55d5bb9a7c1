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

#ifndef LAXOC_CLI_CONFIG_HPP_
#define LAXOC_CLI_CONFIG_HPP_

#include "laxoc/decompose.hpp"
#include "laxoc/rollout.hpp"
#include "laxoc/solver.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace laxoc::cli {

/// Bad or unknown configuration; maps to exit code 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleConfig {
  std::string mode = "hjb";      // "hjb" or "brute"
  std::vector<int> resolution;   // hjb: nodes per axis (default 201 each)
  std::vector<double> box_lo;    // hjb: default -2 per axis
  std::vector<double> box_hi;    // hjb: default 2 per axis
  std::optional<double> tolerance;  // default 2e-2 (hjb) or 1e-4 (brute)
  int K = 8;                     // brute: number of steps
  int controls_per_axis = 7;     // brute: sample nodes per box axis
};

/// Keys (all optional except "problem"):
///   problem, overrides{name: value}, K (100), solver{algorithm, max_iterations,
///   tol_feasibility, tol_objective, random_seed, randomize_start},
///   decomposition ("closed_form" | "lp"), substeps (10),
///   mitigate ("max_likelihood" | "min_residual"), output_dir ("."),
///   seed (0), oracle{mode, resolution, box, tolerance, K, controls_per_axis},
///   K_list ([25, 50, 100, 200]).
struct RunConfig {
  std::string problem;
  std::map<std::string, double> overrides;
  int K = 100;
  SolveOptions solver;
  DecomposeMode decomposition = DecomposeMode::kClosedForm;
  int substeps = 10;
  std::optional<MitigationMode> mitigate;
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  OracleConfig oracle;
  std::vector<int> K_list{25, 50, 100, 200};
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace laxoc::cli

#endif  // LAXOC_CLI_CONFIG_HPP_
