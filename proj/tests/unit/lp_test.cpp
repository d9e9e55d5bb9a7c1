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

#include "laxoc/lp.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <limits>
#include <random>

namespace laxoc {
namespace {

using testing::vec;

// Optimum over all basic feasible solutions, by enumerating column subsets.
double vertex_enumeration(const Mat& A, const Vec& b, const Vec& c) {
  const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(m);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == m) {
      Mat B(m, m);
      for (int i = 0; i < m; ++i) B.col(i) = A.col(pick[i]);
      Eigen::FullPivLU<Mat> lu(B);
      if (lu.rank() < m) return;
      const Vec xb = lu.solve(b);
      if (xb.minCoeff() < -1e-10) return;
      double obj = 0.0;
      for (int i = 0; i < m; ++i) obj += c[pick[i]] * xb[i];
      best = std::min(best, obj);
      return;
    }
    for (int j = start; j < n; ++j) {
      pick[depth] = j;
      rec(j + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

TEST(SolveLp, SmallKnownOptimum) {
  // min -x1 - x2 s.t. x1 + 2 x2 + s1 = 4, 3 x1 + x2 + s2 = 6
  Mat A(2, 4);
  A << 1, 2, 1, 0, 3, 1, 0, 1;
  const auto r = solve_lp(A, vec({4.0, 6.0}), vec({-1.0, -1.0, 0.0, 0.0}));
  ASSERT_EQ(r.status, LpResult::Status::kOptimal);
  EXPECT_NEAR(r.objective, -2.8, 1e-12);
  EXPECT_NEAR(r.x[0], 1.6, 1e-12);
  EXPECT_NEAR(r.x[1], 1.2, 1e-12);
  EXPECT_LE(r.basis.size(), 2u);
}

TEST(SolveLp, DetectsInfeasibleAndUnbounded) {
  Mat A(1, 2);
  A << 1, 1;
  EXPECT_EQ(solve_lp(A, vec({-1.0}), vec({1.0, 1.0})).status, LpResult::Status::kInfeasible);
  Mat B(1, 2);
  B << 1, -1;
  EXPECT_EQ(solve_lp(B, vec({1.0}), vec({0.0, -1.0})).status, LpResult::Status::kUnbounded);
}

TEST(SolveLp, DegenerateHullProblem) {
  // y = 0 is the midpoint of +-e1 and of +-e2; cost favors the e2 pair.
  Mat A(3, 4);
  A << 1, -1, 0, 0, 0, 0, 1, -1, 1, 1, 1, 1;
  const auto r = solve_lp(A, vec({0.0, 0.0, 1.0}), vec({1.0, 1.0, 0.5, 0.5}));
  ASSERT_EQ(r.status, LpResult::Status::kOptimal);
  EXPECT_NEAR(r.objective, 0.5, 1e-12);
  EXPECT_NEAR(r.x[2], 0.5, 1e-12);
  EXPECT_NEAR(r.x[3], 0.5, 1e-12);
}

TEST(SolveLp, AgreesWithVertexEnumeration) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int m = 2 + trial % 3, n = m + 3 + trial % 4;
    Mat A(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = u(rng);
    A.row(m - 1).setOnes();  // bounded: weights on a simplex
    Vec x0(n);
    for (int j = 0; j < n; ++j) x0[j] = std::abs(u(rng));
    x0 /= x0.sum();
    const Vec b = A * x0;
    Vec c(n);
    for (int j = 0; j < n; ++j) c[j] = u(rng);
    const auto r = solve_lp(A, b, c);
    ASSERT_EQ(r.status, LpResult::Status::kOptimal) << trial;
    ++feasible;
    EXPECT_NEAR(r.objective, vertex_enumeration(A, b, c), 1e-9) << trial;
    EXPECT_NEAR((A * r.x - b).norm(), 0.0, 1e-9);
    EXPECT_GE(r.x.minCoeff(), -1e-12);
    EXPECT_LE(static_cast<int>(r.basis.size()), m);
  }
  EXPECT_EQ(feasible, 150);
}

}  // namespace
}  // namespace laxoc
