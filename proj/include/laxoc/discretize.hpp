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

#ifndef LAXOC_DISCRETIZE_HPP_
#define LAXOC_DISCRETIZE_HPP_

#include "laxoc/convex_atoms.hpp"
#include "laxoc/problem.hpp"
#include "laxoc/transform.hpp"
#include "laxoc/types.hpp"

#include <utility>
#include <vector>

namespace laxoc {

/// Nodes t_0 = t < t_1 < ... < t_K = T.
class TimeGrid {
 public:
  TimeGrid() = default;
  /// Arbitrary strictly increasing node list with at least two nodes.
  static TimeGrid from_nodes(std::vector<double> nodes);

  const std::vector<double>& nodes() const { return nodes_; }
  int K() const { return static_cast<int>(nodes_.size()) - 1; }
  double t(int k) const { return nodes_.at(static_cast<std::size_t>(k)); }
  double step(int k) const { return t(k + 1) - t(k); }
  /// Largest step.
  double delta() const { return delta_; }
  double start() const { return nodes_.front(); }
  double end() const { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
  double delta_ = 0.0;
};

/// Uniform grid with K steps on [t, T].
TimeGrid make_grid(double t, double T, int K);

/// Data of one step of the transcription, in y = beta[k] + M(t_k) x[k].
struct TranscribedStep {
  double t = 0.0;
  double dt = 0.0;
  Mat M;
  CostExpr stage;  // Lx(t_k, .)
  ControlPart control;
  std::vector<std::pair<Vec, double>> equalities;  // w.y = r
  std::vector<ConvexAtom> atoms;                   // h(y) <= 0
  std::vector<ConvexAtom> state_constraints;       // on x[k]
};

struct ProgramResiduals {
  double dynamics = 0.0;
  double initial = 0.0;
  double control_set = 0.0;
  double state_constraint = 0.0;
  double max() const;
};

/// The discretized Lax formula
///   min sum_k H*(t_k, x[k], beta[k]) dt_k + g(x[K])
///   s.t. x[k+1] = x[k] - beta[k] dt_k, x[0] = x0,
///        beta[k] in Conv(B(t_k, x[k])), c(t_k, x[k]) <= 0, k < K.
///
/// In reduced form the states are eliminated: x[k] = x0 - sum_{j<k} beta[j] dt_j
/// and beta is the only decision variable.
struct TranscribedProgram {
  ProblemSpec spec;
  TimeGrid grid;
  int n = 0;
  Vec x0;
  std::vector<TranscribedStep> steps;
  CostExpr terminal;
  bool reduced = false;

  int K() const { return grid.K(); }
  /// Scalar decision variables: (K+1) n + K n, or K n when reduced.
  int num_variables() const;
  int num_cone_constraints() const;
  int num_state_constraints() const;
  /// Control-set equalities that involve the state.
  int num_linking_equalities() const;

  /// States generated by the dynamics recursion from x0.
  std::vector<Vec> states_from_controls(const std::vector<Vec>& beta) const;

  /// Objective at (x, beta); +infinity when some beta[k] lies outside its
  /// set by more than the hull tolerance.
  ExtendedReal objective(const std::vector<Vec>& x, const std::vector<Vec>& beta) const;
  /// Reduced form: objective along the recursion.
  ExtendedReal objective(const std::vector<Vec>& beta) const;

  /// Control part of H* at step k for y = beta + M x (inside the set).
  double control_cost(int k, const Vec& y) const;

  ProgramResiduals residuals(const std::vector<Vec>& x, const std::vector<Vec>& beta) const;
};

struct TranscribeOptions {
  bool allow_nonconvex = false;
  /// Generator cap for problems whose control part is sampled.
  std::size_t max_generators = 400;
};

/// Requires a StructuredForm. Throws InvalidArgument when the convexity
/// check fails unless allow_nonconvex is set.
TranscribedProgram transcribe(const ProblemSpec& spec, const TimeGrid& grid,
                              const TranscribeOptions& opts = {});

/// Same program with the states substituted out.
TranscribedProgram eliminate_states(TranscribedProgram program);

}  // namespace laxoc

#endif  // LAXOC_DISCRETIZE_HPP_
