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

// Epigraph form of a transcribed program, shared by the solver backends.

#ifndef LAXOC_SRC_CONVEX_PROGRAM_HPP_
#define LAXOC_SRC_CONVEX_PROGRAM_HPP_

#include "laxoc/convex_atoms.hpp"
#include "laxoc/discretize.hpp"
#include "laxoc/solver.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <random>
#include <vector>

namespace laxoc::detail {

/// y = F z[cols] + f
struct AffineMap {
  std::vector<int> cols;
  Mat F;
  Vec f;

  Eigen::Index rows() const { return f.size(); }
  bool constant() const { return cols.empty(); }
  Vec eval(const Vec& z) const {
    Vec y = f;
    for (std::size_t j = 0; j < cols.size(); ++j) y += F.col(j) * z[cols[j]];
    return y;
  }
};

/// Sa * a + Sb * b, with duplicate columns merged and zero columns dropped.
AffineMap combine(const AffineMap& a, const Mat& Sa, const AffineMap& b, const Mat& Sb);
/// Drop columns that do not touch the given rows.
AffineMap restrict_to_rows(const AffineMap& m, const std::vector<int>& rows);

/// atom(map(z)) - z[slack] <= 0 (slack < 0: no slack)
struct AtomTerm {
  AffineMap map;
  ConvexAtom atom;
  int slack = -1;
};

/// ||map(z)|| <= z[tau]
struct ConeTerm {
  int tau = 0;
  AffineMap map;
};

/// weight * f(map(z))
struct SmoothObjective {
  AffineMap map;
  std::function<double(const Vec&)> f;
  double weight = 1.0;
};

struct ConvexProgram {
  int num_vars = 0;
  Vec c;
  double c0 = 0.0;
  std::vector<SmoothObjective> smooth;
  Eigen::SparseMatrix<double> A;
  Vec b;
  std::vector<AtomTerm> atoms;
  std::vector<ConeTerm> cones;

  double objective(const Vec& z) const;
  /// Number of barrier terms weighted by their degree.
  double barrier_degree() const { return atoms.size() + 2.0 * cones.size(); }
};

/// Variable layout of a lowered transcription.
struct Layout {
  bool reduced = false;
  int n = 0;
  int K = 0;
  Vec x0;
  std::vector<double> dt;
  int beta_offset(int k) const { return reduced ? k * n : K * n + k * n; }
  int x_offset(int k) const { return (k - 1) * n; }  // k >= 1, full form only
  std::vector<int> epigraph;                          // epigraph variables
  std::vector<std::vector<int>> gamma;                // per step, if any
};

struct Lowered {
  ConvexProgram prog;
  Layout layout;
  /// Violation of constraints that do not involve any variable.
  double constant_violation = 0.0;
};

Lowered lower(const TranscribedProgram& program, double objective_scale);

/// Point satisfying every equality, with each y strictly inside its set
/// (centroid of the generator sample, or a random interior combination).
Vec initial_point(const Lowered& low, const TranscribedProgram& program, std::mt19937_64* rng);

std::vector<Vec> extract_beta(const Lowered& low, const Vec& z);

/// Map for x[k] in the given layout.
AffineMap state_map(const Layout& layout, int k);

struct BackendResult {
  Vec z;
  int iterations = 0;
  SolveStatus status = SolveStatus::kFailed;
  std::vector<double> history;
  std::string message;
};

BackendResult barrier_solve(const ConvexProgram& prog, Vec z0, const SolveOptions& opts);
BackendResult augmented_lagrangian_solve(const ConvexProgram& prog, Vec z0,
                                         const SolveOptions& opts);

}  // namespace laxoc::detail

#endif  // LAXOC_SRC_CONVEX_PROGRAM_HPP_
