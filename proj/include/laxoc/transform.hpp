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

#ifndef LAXOC_TRANSFORM_HPP_
#define LAXOC_TRANSFORM_HPP_

#include "laxoc/convex_atoms.hpp"
#include "laxoc/problem.hpp"
#include "laxoc/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace laxoc {

/// Absolute tolerance for "b lies in Conv(B(s,x))".
inline constexpr double kHullTol = 1e-6;

/// Candidate extreme velocities b_j = -f(s,x,a_j) on a subset of the
/// coordinates, with the stage cost attributed to each and the control that
/// realizes it. A product problem has one block per factor.
struct GeneratorBlock {
  std::vector<int> coords;
  std::vector<Vec> points;
  std::vector<double> costs;
  std::vector<Vec> controls;
  /// Positions of this block's control entries within the full control.
  std::vector<int> control_coords;
};

/// Conv(B(s,x)) for one (s,x).
///
/// Equalities and atoms act on y = b + shift, where shift = M(s) x for
/// structured problems and 0 otherwise. When `closed_form` is false the set
/// is only known through the generator blocks (its hull).
struct ConvexControlSet {
  int dim = 0;
  Vec shift;
  std::vector<std::pair<Vec, double>> equalities;  // w.y = r
  std::vector<ConvexAtom> inequalities;            // h(y) <= 0
  std::vector<GeneratorBlock> generators;
  /// Stage-cost part not carried by the generator costs (Lx for structured
  /// problems whose blocks carry only La).
  double cost_offset = 0.0;
  bool closed_form = false;

  /// Max equality and atom violation of b (closed form only).
  double atom_residual(const Vec& b) const;
  /// Violation of b: atom residual for closed forms, else the phase-one
  /// residual of the hull LP.
  double membership_residual(const Vec& b) const;
  bool contains(const Vec& b, double tol = kHullTol) const {
    return membership_residual(b) <= tol;
  }
};

/// Control-dependent part of H*, as a function of y = b + M(s) x
/// (structured problems only).
struct ControlPart {
  enum class Kind { kZero, kAffine, kGenerators };
  Kind kind = Kind::kZero;
  /// kAffine: value coeff.y + constant on the hull.
  Vec coeff;
  double constant = 0.0;
  /// kGenerators: y_j = -phi(s, a_j) with costs La(s, a_j); the
  /// conjugate is the lower convex envelope over their hull.
  GeneratorBlock generators;
};

struct HamiltonianValue {
  double value = 0.0;
  Vec argmax;
};

/// H(s,x,p) = max over A of -p.f - L. Closed form for built-ins, otherwise
/// a maximum over the control sample.
HamiltonianValue hamiltonian(const ProblemSpec& spec, double s, const Vec& x, const Vec& p);

/// Minimum stage cost over sampled controls with ||f(s,x,a) + b|| <= tol.
ExtendedReal lb_cost(const ProblemSpec& spec, double s, const Vec& x, const Vec& b,
                     double tol = 1e-6);

enum class HstarMethod { kAuto, kClosedForm, kGeneratorLp };

/// The convexified stage cost H*(s,x,b). +infinity exactly when b is
/// certified outside Conv(B(s,x)).
ExtendedReal hstar(const ProblemSpec& spec, double s, const Vec& x, const Vec& b,
                   HstarMethod method = HstarMethod::kAuto);

/// Result of the hull LP: min sum gamma_j c_j, sum gamma_j b_j = b,
/// sum gamma_j = 1, gamma >= 0, solved block by block.
struct HullLpSolution {
  bool feasible = false;
  double infeasibility = 0.0;
  double cost = 0.0;
  /// Per block: (point index, weight) pairs of the basic solution.
  std::vector<std::vector<std::pair<int, double>>> weights;
};
HullLpSolution solve_hull_lp(const ConvexControlSet& set, const Vec& b);

/// max over the generator sample of p.b_j - L^b(b_j), block by block:
/// the sampled conjugate of L^b, which should reproduce H(s,x,p).
double conjugate_over_generators(const ConvexControlSet& set, const Vec& p);

/// Conv(B(s,x)) with closed-form atoms for built-ins, generator sample always.
ConvexControlSet conv_control_set(const ProblemSpec& spec, double s, const Vec& x);

/// Closed-form atoms and equalities only (built-ins); no generator sample.
ConvexControlSet closed_form_control_set(const ProblemSpec& spec, double s, const Vec& x);

/// Generator sample only (skips closed forms); used by the generic paths.
ConvexControlSet generator_control_set(const ProblemSpec& spec, double s, const Vec& x,
                                       std::size_t max_points = 10000);

/// Control part of H* for structured problems. Throws without StructuredForm.
ControlPart control_part(const ProblemSpec& spec, double s,
                         std::size_t max_generators = 400);

/// Euclidean projection onto a closed-form set by Dykstra's alternating
/// projections (at most 500 sweeps). Throws NumericalError on non-convergence.
Vec project(const ConvexControlSet& set, const Vec& b, double tol = 1e-9);

enum class CheckStatus { kPass, kFail, kInconclusive };
std::string to_string(CheckStatus s);

struct ConvexityReport {
  struct Entry {
    std::string name;
    CheckStatus status = CheckStatus::kInconclusive;
    std::string detail;
  };
  std::vector<Entry> entries;
  /// Convexity of the discretized original problem.
  CheckStatus condition1 = CheckStatus::kInconclusive;
  /// Convexity of the discretized Lax formula.
  CheckStatus condition2 = CheckStatus::kInconclusive;
  /// Sampled joint convexity of {(x,b) : b in Conv(B(s,x))}.
  CheckStatus joint_set = CheckStatus::kInconclusive;

  const Entry* find(const std::string& name) const;
};

ConvexityReport check_convexity_conditions(const ProblemSpec& spec, std::uint64_t seed = 11);

}  // namespace laxoc

#endif  // LAXOC_TRANSFORM_HPP_
