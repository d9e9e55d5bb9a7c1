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

#ifndef LAXOC_PROBLEM_HPP_
#define LAXOC_PROBLEM_HPP_

#include "laxoc/control_set.hpp"
#include "laxoc/convex_atoms.hpp"
#include "laxoc/types.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace laxoc {

using DynamicsFn = std::function<Vec(double s, const Vec& x, const Vec& a)>;
using StageCostFn = std::function<double(double s, const Vec& x, const Vec& a)>;
using TerminalCostFn = std::function<double(const Vec& x)>;
using StateConstraintFn = std::function<double(double s, const Vec& x)>;

/// f(s,x,a) = M(s) x + phi(s,a) and L(s,x,a) = Lx(s,x) + La(s,a).
struct StructuredForm {
  std::function<Mat(double s)> M;
  std::function<Vec(double s, const Vec& a)> phi;
  std::function<double(double s, const Vec& x)> Lx;
  std::function<double(double s, const Vec& a)> La;
};

/// Convex state-side data in a form the solver can lower to cone constraints:
/// Lx(s, .), g and the state constraint c(s, .) <= 0 as a list of atoms.
/// Problems without it are transcribed through black-box smooth terms.
struct ConvexModel {
  std::function<CostExpr(double s)> stage;
  CostExpr terminal;
  std::function<std::vector<ConvexAtom>(double s)> constraints;
};

enum class BuiltinId { kNone, kVehicle2d, kFormation12d, kGear4d };

/// The original control problem: minimize the integral of L plus g(x(T))
/// over controls in A, subject to x' = f and c(s, x(s)) <= 0.
struct ProblemSpec {
  std::string name = "custom";
  int state_dim = 0;
  int control_dim = 0;
  double t0 = 0.0;
  double T = 1.0;
  Vec initial_state;

  DynamicsFn dynamics;
  StageCostFn stage_cost;
  TerminalCostFn terminal_cost;
  StateConstraintFn state_constraint;  // empty: unconstrained

  ControlSetDescriptor control_set = ControlSetDescriptor::box(Vec::Zero(1), Vec::Zero(1));
  std::optional<StructuredForm> structured;
  std::optional<ConvexModel> convex;

  BuiltinId builtin = BuiltinId::kNone;
  std::map<std::string, double> params;

  bool has_state_constraint() const { return static_cast<bool>(state_constraint); }
  /// c(s,x), or -infinity when the problem has no state constraint.
  double constraint(double s, const Vec& x) const;
};

/// Names accepted by make_builtin.
std::vector<std::string> builtin_names();

/// Tunable keys and their default values for a built-in.
std::map<std::string, double> builtin_tunables(const std::string& name);

/// One of the shipped example systems, with overrides applied.
/// Initial-state entries are keyed x0_1 .. x0_n.
ProblemSpec make_builtin(const std::string& name,
                         const std::map<std::string, double>& overrides = {});

/// Left-endpoint Riemann sum of L over the grid plus g at the last state.
/// `controls` has one entry per grid node or per interval.
double eval_cost_of_trajectory(const ProblemSpec& spec, const std::vector<double>& times,
                               const std::vector<Vec>& states,
                               const std::vector<Vec>& controls);

/// Sampled checks of the standing assumptions.
struct ProblemDiagnostics {
  double min_stage_cost = 0.0;
  double min_terminal_cost = 0.0;
  double lipschitz_f = 0.0;
  double lipschitz_L = 0.0;
  double lipschitz_g = 0.0;
  double lipschitz_c = 0.0;
  double max_speed = 0.0;
  /// Largest residual of the StructuredForm identities; NaN when absent.
  double structured_residual = 0.0;
  bool ok = true;
  std::vector<std::string> messages;
};

/// Samples states in a box around the initial state large enough to hold
/// the reachable tube, and evaluates cost bounds, difference-quotient
/// Lipschitz ratios (200 pairs) and StructuredForm residuals (100 samples).
ProblemDiagnostics check_problem(const ProblemSpec& spec, std::uint64_t seed = 7);

/// Half-width of a box around x0 containing every state reachable over the
/// horizon, from the sampled speed bound.
double reachable_radius(const ProblemSpec& spec);

}  // namespace laxoc

#endif  // LAXOC_PROBLEM_HPP_
