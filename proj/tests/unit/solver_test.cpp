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

#include "laxoc/solver.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace laxoc {
namespace {

using testing::vec;

// Best constant heading for the vehicle, by a dense sweep.
double constant_heading_optimum(const Vec& x0) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200000; ++i) {
    const double th = -std::numbers::pi + 2.0 * std::numbers::pi * i / 200000.0;
    best = std::min(best, (x0 + vec({std::cos(th), std::sin(th)})).norm());
  }
  return best;
}

SolveResult solve_builtin(const std::string& name, int K, const SolveOptions& opts = {}) {
  const auto spec = make_builtin(name);
  return solve(transcribe(spec, make_grid(spec.t0, spec.T, K)), opts);
}

TEST(Solve, VehicleReachesTheStraightLineOptimum) {
  const auto r = solve_builtin("vehicle2d", 100);
  ASSERT_EQ(r.status, SolveStatus::kConverged) << r.message;
  const double oracle = constant_heading_optimum(vec({-1.0, -0.5}));
  EXPECT_NEAR(oracle, std::sqrt(1.25) - 1.0, 1e-9);
  EXPECT_NEAR(r.objective, oracle, 1e-3);
  EXPECT_LE(r.residuals.max(), 1e-6);
  EXPECT_LE(r.residuals.dynamics, 1e-14);
  ASSERT_EQ(r.x_star.size(), 101u);
  ASSERT_EQ(r.beta_star.size(), 100u);
}

TEST(Solve, GearRespectsTheSpeedLimit) {
  const auto spec = make_builtin("gear4d");
  const auto grid = make_grid(0.0, 1.0, 100);
  const auto p = transcribe(spec, grid);
  const auto r = solve(p, {});
  ASSERT_EQ(r.status, SolveStatus::kConverged) << r.message;
  double worst = 0.0;
  for (const auto& x : r.x_star) worst = std::max(worst, std::abs(x[1]));
  EXPECT_LE(worst, 0.1 + 1e-6);
  for (int k = 0; k < grid.K(); ++k) {
    const auto set = closed_form_control_set(spec, grid.t(k), r.x_star[k]);
    EXPECT_LE(set.atom_residual(r.beta_star[k]), 1e-6) << k;
  }
}

TEST(Solve, CertifiesInfeasibility) {
  auto spec = testing::custom_vehicle();
  spec.state_constraint = [](double, const Vec& x) { return x.squaredNorm() + 1.0; };
  const auto p = transcribe(spec, make_grid(0.0, 1.0, 5), {.allow_nonconvex = true, .max_generators = 64});
  EXPECT_EQ(solve(p, {}).status, SolveStatus::kInfeasible);
}

TEST(Solve, HistoryIsMonotoneAndRunsAreDeterministic) {
  const auto a = solve_builtin("vehicle2d", 50);
  const auto b = solve_builtin("vehicle2d", 50);
  ASSERT_EQ(a.status, SolveStatus::kConverged);
  for (std::size_t i = 1; i < a.objective_history.size(); ++i) {
    EXPECT_LE(a.objective_history[i], a.objective_history[i - 1]);
  }
  ASSERT_EQ(a.beta_star.size(), b.beta_star.size());
  for (std::size_t k = 0; k < a.beta_star.size(); ++k) {
    EXPECT_EQ(a.beta_star[k], b.beta_star[k]);
  }
  EXPECT_EQ(a.objective, b.objective);
}

TEST(Solve, ObjectiveScalingKeepsTheMinimizer) {
  SolveOptions scaled;
  scaled.objective_scale = 10.0;
  const auto a = solve_builtin("vehicle2d", 50);
  const auto b = solve_builtin("vehicle2d", 50, scaled);
  ASSERT_EQ(b.status, SolveStatus::kConverged);
  EXPECT_NEAR(a.objective, b.objective, 1e-5);
  EXPECT_LE((a.x_star.back() - b.x_star.back()).norm(), 1e-4);
  for (std::size_t k = 0; k < a.beta_star.size(); ++k) {
    EXPECT_LE((a.beta_star[k] - b.beta_star[k]).norm(), 1e-3) << k;
  }
}

TEST(Solve, RandomRestartsAgree) {
  std::vector<double> objectives;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SolveOptions o;
    o.randomize_start = true;
    o.random_seed = seed;
    const auto r = solve_builtin("gear4d", 40, o);
    ASSERT_EQ(r.status, SolveStatus::kConverged) << seed;
    objectives.push_back(r.objective);
  }
  const auto [lo, hi] = std::minmax_element(objectives.begin(), objectives.end());
  EXPECT_LE(*hi - *lo, 1e-4);
}

TEST(Solve, AugmentedLagrangianBackendAgrees) {
  SolveOptions o;
  o.algorithm = SolverAlgorithm::kAugmentedLagrangian;
  const auto r = solve_builtin("vehicle2d", 50, o);
  ASSERT_EQ(r.status, SolveStatus::kConverged) << r.message;
  EXPECT_NEAR(r.objective, std::sqrt(1.25) - 1.0, 1e-3);
  EXPECT_LE(r.residuals.max(), 1e-6);
}

TEST(KktResiduals, VehicleOptimumIsStationary) {
  const auto spec = make_builtin("vehicle2d");
  const auto p = transcribe(spec, make_grid(0.0, 1.0, 100));
  const auto r = solve(p, {});
  ASSERT_EQ(r.status, SolveStatus::kConverged);
  EXPECT_LE(kkt_residuals(p, r).stationarity, 1e-3);

  // the analytic optimum: full speed toward the origin
  SolveResult analytic;
  const Vec u = spec.initial_state.normalized();
  analytic.beta_star.assign(100, u);
  analytic.x_star = p.states_from_controls(analytic.beta_star);
  EXPECT_LE(kkt_residuals(p, analytic).stationarity, 1e-3);
}

TEST(KktResiduals, ReportsPrimalViolation) {
  const auto spec = make_builtin("vehicle2d");
  const auto p = transcribe(spec, make_grid(0.0, 1.0, 10));
  SolveResult bad;
  bad.beta_star.assign(10, vec({2.0, 0.0}));
  bad.x_star = p.states_from_controls(bad.beta_star);
  EXPECT_GT(kkt_residuals(p, bad).primal.control_set, 0.5);
}

TEST(KktResiduals, ZeroCostProblemIsStationaryEverywhere) {
  auto spec = testing::custom_vehicle();
  spec.terminal_cost = [](const Vec&) { return 0.0; };
  const auto p = transcribe(spec, make_grid(0.0, 1.0, 6), {.allow_nonconvex = true, .max_generators = 64});
  SolveResult any;
  any.beta_star.assign(6, vec({0.2, -0.3}));
  any.x_star = p.states_from_controls(any.beta_star);
  EXPECT_NEAR(kkt_residuals(p, any).stationarity, 0.0, 1e-12);
}

}  // namespace
}  // namespace laxoc
