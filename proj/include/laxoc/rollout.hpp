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

#ifndef LAXOC_ROLLOUT_HPP_
#define LAXOC_ROLLOUT_HPP_

#include "laxoc/decompose.hpp"
#include "laxoc/discretize.hpp"
#include "laxoc/problem.hpp"
#include "laxoc/solver.hpp"

#include <string>
#include <vector>

namespace laxoc {

/// Piecewise-constant control: values[i] on [breakpoints[i], breakpoints[i+1]).
struct PiecewiseControl {
  std::vector<double> breakpoints;
  std::vector<Vec> values;

  int pieces() const { return static_cast<int>(values.size()); }
  /// Value at time t (the last piece also owns the right end point).
  const Vec& value_at(double t) const;
  /// Number of breakpoints where the value actually changes.
  int switch_count() const;
  /// Max membership residual of the values in A.
  double control_set_residual(const ControlSetDescriptor& set) const;
};

PiecewiseControl synthesize_alpha(const SwitchSchedule& schedule);

struct RolloutResult {
  std::vector<double> times;     // fine grid, first entry t, last entry T
  std::vector<Vec> states;       // one per time
  std::vector<Vec> controls;     // one per fine interval
  double cost = 0.0;             // left Riemann sum of L plus g(x(T))
  int switch_count = 0;
};

/// Classical RK4 with `substeps` equal steps inside every piece, so no step
/// straddles a switch.
RolloutResult integrate(const ProblemSpec& spec, const PiecewiseControl& ctrl, const Vec& x0,
                        int substeps = 10);

struct RolloutGaps {
  double sup_gap = 0.0;   // max over the fine grid of ||x_lax(t) - x_eps(t)||
  double cost_gap = 0.0;  // |Lax objective - realized cost|
};

/// Compares a rollout with the Lax trajectory, interpolated linearly between
/// grid nodes.
RolloutGaps gaps(const SolveResult& lax, const RolloutResult& rollout, const TimeGrid& grid);

/// Linear interpolation of node values on the grid.
Vec interpolate(const TimeGrid& grid, const std::vector<Vec>& nodes, double t);

/// Growth bound ||x(s) - x0|| <= C (s - t) with C = 1.1 max ||f|| over the
/// visited states and a control sample.
struct GrowthReport {
  double constant = 0.0;
  double max_excess = 0.0;  // max of ||x(s) - x0|| - C (s - t); <= 0 passes
};
GrowthReport check_growth_bound(const ProblemSpec& spec, const RolloutResult& rollout,
                                std::size_t control_samples = 200);

/// Largest c(s, x(s)) along the rollout (-inf without a state constraint).
double max_state_constraint(const ProblemSpec& spec, const RolloutResult& rollout);

/// Single-control-per-step heuristics; neither carries an optimality
/// certificate.
enum class MitigationMode { kMaxLikelihood, kMinResidual };
std::string to_string(MitigationMode m);
MitigationMode parse_mitigation_mode(const std::string& name);

/// kMaxLikelihood keeps the heaviest atom of each step. kMinResidual walks
/// x_eps[k+1] = x_eps[k] + f(t_k, x_eps[k], a) dt, choosing a from the control
/// sample (plus the step's atoms) to best match x_lax[k+1] - x_eps[k]; it
/// requires a stage cost that does not depend on the control.
PiecewiseControl mitigate_switching(const ControlDecomposition& decomps, const SolveResult& lax,
                                    const ProblemSpec& spec, const TimeGrid& grid,
                                    MitigationMode mode, std::size_t control_samples = 10000);

}  // namespace laxoc

#endif  // LAXOC_ROLLOUT_HPP_
