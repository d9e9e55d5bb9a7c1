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

#ifndef LAXOC_SOLVER_HPP_
#define LAXOC_SOLVER_HPP_

#include "laxoc/discretize.hpp"
#include "laxoc/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace laxoc {

enum class SolverAlgorithm {
  /// Primal log-barrier interior point on the epigraph form, sparse KKT.
  kBarrier,
  /// Augmented Lagrangian over the same epigraph form, L-BFGS inner loop.
  kAugmentedLagrangian,
};

struct SolveOptions {
  int max_iterations = 2000;
  double tol_feasibility = 1e-6;
  double tol_objective = 1e-5;
  SolverAlgorithm algorithm = SolverAlgorithm::kBarrier;
  /// Seeds the random initial point when randomize_start is set.
  std::uint64_t random_seed = 0;
  bool randomize_start = false;
  /// Positive factor multiplying the objective (conditioning only).
  double objective_scale = 1.0;
};

enum class SolveStatus { kConverged, kMaxIterations, kInfeasible, kFailed };
std::string to_string(SolveStatus s);

struct SolveResult {
  std::vector<Vec> x_star;     // K+1 states, generated from beta_star
  std::vector<Vec> beta_star;  // K velocity controls
  double objective = 0.0;
  ProgramResiduals residuals;
  int iterations = 0;
  SolveStatus status = SolveStatus::kFailed;
  /// Best objective so far after each outer iteration.
  std::vector<double> objective_history;
  std::string message;
};

/// Solves the transcribed program. States are regenerated from the returned
/// controls, so the dynamics hold to rounding.
SolveResult solve(const TranscribedProgram& program, const SolveOptions& opts = {});

struct KktDiagnostics {
  ProgramResiduals primal;
  /// Norm of the objective subgradient after removing the best nonnegative
  /// combination of near-active constraint gradients and equality normals.
  double stationarity = 0.0;
};

KktDiagnostics kkt_residuals(const TranscribedProgram& program, const SolveResult& result);

}  // namespace laxoc

#endif  // LAXOC_SOLVER_HPP_
