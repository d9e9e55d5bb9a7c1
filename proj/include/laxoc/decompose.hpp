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

#ifndef LAXOC_DECOMPOSE_HPP_
#define LAXOC_DECOMPOSE_HPP_

#include "laxoc/discretize.hpp"
#include "laxoc/problem.hpp"
#include "laxoc/types.hpp"

#include <string>
#include <vector>

namespace laxoc {

/// One admissible control a with velocity b = -f(s,x,a) and its weight.
struct DecompositionAtom {
  Vec control;
  Vec velocity;
  double weight = 0.0;
};

enum class DecomposeMode { kClosedForm, kLp };
std::string to_string(DecomposeMode m);
DecomposeMode parse_decompose_mode(const std::string& name);

/// Writes b in Conv(B(s,x)) as a convex combination of admissible velocities
/// whose weighted stage cost equals H*(s,x,b). Atoms come back in descending
/// weight, weights below 1e-10 pruned and the rest renormalized.
///
/// kClosedForm uses the geometry of the built-in problems and falls back to
/// kLp for anything else. kLp solves the hull LP over the generator sample
/// and keeps its basic columns; product control sets are decomposed per
/// factor and the factor weights merged, so at most n+1 atoms result.
std::vector<DecompositionAtom> decompose_control(const ProblemSpec& spec, double s,
                                                 const Vec& x, const Vec& b,
                                                 DecomposeMode mode = DecomposeMode::kClosedForm);

/// Per-step decompositions along a solved trajectory.
struct ControlDecomposition {
  std::vector<std::vector<DecompositionAtom>> steps;
};

ControlDecomposition decompose_trajectory(const ProblemSpec& spec, const TimeGrid& grid,
                                          const std::vector<Vec>& x, const std::vector<Vec>& beta,
                                          DecomposeMode mode = DecomposeMode::kClosedForm);

/// Violations of the decomposition invariants at one step.
struct DecompositionCheck {
  double min_weight = 0.0;        // smallest weight (should be >= 0)
  double weight_sum_error = 0.0;  // |sum gamma - 1|
  double reconstruction = 0.0;    // ||sum gamma b_i - b||
  double dynamics = 0.0;          // max ||b_i + f(s,x,a_i)||
  double cost = 0.0;              // |sum gamma L(a_i) - H*(b)|
  double control_set = 0.0;       // max membership residual of a_i in A
};

DecompositionCheck check_decomposition(const ProblemSpec& spec, double s, const Vec& x,
                                       const Vec& b, const std::vector<DecompositionAtom>& atoms);

/// Piecewise-constant assignment on a refinement of the time grid: step k
/// is split into consecutive pieces of length gamma_i * dt in atom order.
struct SwitchSchedule {
  std::vector<double> breakpoints;  // pieces + 1 entries, from t to T
  std::vector<Vec> controls;        // one per piece
  std::vector<int> step;            // grid step owning each piece
};

SwitchSchedule switch_schedule(const TimeGrid& grid, const ControlDecomposition& decomps);

}  // namespace laxoc

#endif  // LAXOC_DECOMPOSE_HPP_
