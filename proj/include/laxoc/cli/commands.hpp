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

#ifndef LAXOC_CLI_COMMANDS_HPP_
#define LAXOC_CLI_COMMANDS_HPP_

#include "laxoc/cli/config.hpp"
#include "laxoc/decompose.hpp"
#include "laxoc/discretize.hpp"
#include "laxoc/rollout.hpp"
#include "laxoc/solver.hpp"
#include "laxoc/transform.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace laxoc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCompareFailed = 1,
  kExitNotConverged = 2,
  kExitConfigError = 3,
};

/// Aggregated invariant violations over all steps.
struct DecompositionSummary {
  double min_weight = 0.0;
  double max_atoms = 0.0;
  double weight_sum_error = 0.0;
  double reconstruction = 0.0;
  double dynamics = 0.0;
  double cost = 0.0;
  double control_set = 0.0;
};

struct MitigationSummary {
  MitigationMode mode = MitigationMode::kMaxLikelihood;
  PiecewiseControl control;
  RolloutResult rollout;
  RolloutGaps gaps;
};

/// Everything one transcribe/solve/decompose/synthesize/integrate run yields.
/// Stages after the solve are skipped when it does not converge.
struct PipelineResult {
  ProblemSpec spec;
  TimeGrid grid;
  SolveResult solution;
  ControlDecomposition decomposition;
  DecompositionSummary decomposition_check;
  PiecewiseControl alpha;
  RolloutResult rollout;
  RolloutGaps gaps;
  GrowthReport growth;
  double max_state_constraint = 0.0;
  std::optional<MitigationSummary> mitigation;
  std::map<std::string, double> timings;  // seconds per stage

  bool converged() const { return solution.status == SolveStatus::kConverged; }
};

DecompositionSummary summarize_decomposition(const ProblemSpec& spec, const TimeGrid& grid,
                                             const SolveResult& sol,
                                             const ControlDecomposition& decomps);

PipelineResult run_pipeline(const RunConfig& config, int K);

int cmd_solve(const RunConfig& config, std::ostream& log);
int cmd_oracle(const RunConfig& config, std::ostream& log);
int cmd_convergence(const RunConfig& config, std::ostream& log);
int cmd_list_problems(std::ostream& out);

/// Worker count for sweeps: LAXOC_THREADS if set, else the hardware count.
int worker_threads();

}  // namespace laxoc::cli

#endif  // LAXOC_CLI_COMMANDS_HPP_
