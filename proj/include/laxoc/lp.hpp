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

#ifndef LAXOC_LP_HPP_
#define LAXOC_LP_HPP_

#include "laxoc/types.hpp"

#include <vector>

namespace laxoc {

struct LpOptions {
  /// Phase-one residual (relative to 1 + max|b|) tolerated as "feasible".
  double feasibility_tol = 1e-6;
  double optimality_tol = 1e-10;
  int max_iterations = 20000;
};

struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };
  Status status = Status::kIterationLimit;
  Vec x;
  double objective = 0.0;
  /// Phase-one residual: sum of artificial variables at the end of phase one.
  double infeasibility = 0.0;
  /// Structural columns in the final basis. At most rows(A) of them.
  std::vector<int> basis;
  int iterations = 0;
};

/// min c.x  s.t.  A x = b, x >= 0, by a two-phase dense tableau simplex
/// (Dantzig pricing, switching to Bland's rule after a run of degenerate
/// pivots). The optimum returned is a basic solution.
LpResult solve_lp(const Mat& A, const Vec& b, const Vec& c, const LpOptions& opts = {});

}  // namespace laxoc

#endif  // LAXOC_LP_HPP_
