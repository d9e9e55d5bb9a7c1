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

#include "laxoc/problem.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace laxoc {
namespace {

using testing::uniform_vec;
using testing::vec;

constexpr double kPi = std::numbers::pi;

TEST(MakeBuiltin, VehicleShape) {
  const auto spec = make_builtin("vehicle2d", {{"x0_1", -1.0}, {"x0_2", -0.5}});
  EXPECT_EQ(spec.state_dim, 2);
  EXPECT_EQ(spec.control_dim, 1);
  EXPECT_DOUBLE_EQ(spec.t0, 0.0);
  EXPECT_DOUBLE_EQ(spec.T, 1.0);
  EXPECT_TRUE(spec.control_set.contains(vec({kPi})));
  EXPECT_TRUE(spec.control_set.contains(vec({-kPi})));
  EXPECT_FALSE(spec.control_set.contains(vec({kPi + 1e-3})));
  EXPECT_DOUBLE_EQ(spec.terminal_cost(vec({3.0, 4.0})), 5.0);
  EXPECT_DOUBLE_EQ(spec.stage_cost(0.3, vec({1.0, 2.0}), vec({0.2})), 0.0);
  EXPECT_FALSE(spec.has_state_constraint());
}

TEST(MakeBuiltin, GearShape) {
  const auto spec = make_builtin("gear4d", {});
  EXPECT_EQ(spec.state_dim, 4);
  EXPECT_EQ(spec.control_dim, 2);
  EXPECT_DOUBLE_EQ(spec.params.at("c1"), 1.0);
  EXPECT_DOUBLE_EQ(spec.params.at("c2"), 3.0);
  EXPECT_DOUBLE_EQ(spec.T, 1.0);
  EXPECT_TRUE(spec.control_set.contains(vec({1.0, 0.0})));
  EXPECT_TRUE(spec.control_set.contains(vec({2.0, 1.0})));
  EXPECT_FALSE(spec.control_set.contains(vec({1.5, 0.5})));
  EXPECT_FALSE(spec.control_set.contains(vec({2.0, 1.1})));
  EXPECT_FALSE(spec.control_set.contains(vec({1.0, -0.1})));
  EXPECT_TRUE(spec.has_state_constraint());
}

TEST(MakeBuiltin, FormationShape) {
  const auto spec = make_builtin("formation12d", {});
  EXPECT_EQ(spec.state_dim, 12);
  EXPECT_EQ(spec.control_dim, 6);
  EXPECT_DOUBLE_EQ(spec.t0, 0.0);
  EXPECT_DOUBLE_EQ(spec.T, 10.0);
  EXPECT_TRUE(spec.control_set.contains(vec({-1.0, -kPi / 6, 3.0, kPi / 6, 0.0, 0.0})));
  EXPECT_FALSE(spec.control_set.contains(vec({3.1, 0.0, 0.0, 0.0, 0.0, 0.0})));
  EXPECT_FALSE(spec.control_set.contains(vec({0.0, 0.0, 0.0, 0.6, 0.0, 0.0})));
}

TEST(MakeBuiltin, OverridesAndErrors) {
  const auto spec = make_builtin("vehicle2d", {{"x0_1", 0.25}, {"T", 2.0}});
  EXPECT_DOUBLE_EQ(spec.initial_state[0], 0.25);
  EXPECT_DOUBLE_EQ(spec.initial_state[1], -0.5);
  EXPECT_DOUBLE_EQ(spec.T, 2.0);
  EXPECT_THROW(make_builtin("pendulum", {}), InvalidArgument);
  EXPECT_THROW(make_builtin("vehicle2d", {{"bogus", 1.0}}), InvalidArgument);
  EXPECT_THROW(make_builtin("gear4d", {{"c1", -1.0}}), InvalidArgument);
  EXPECT_EQ(builtin_names().size(), 3u);
}

// Written out again from the model equations, independent of problem.cpp.
Vec gear_f(const Vec& x, const Vec& a) {
  const double D = 1.0 + 3.0 * a[0] * a[0];
  return vec({x[1], a[1] / D, x[3], -a[0] * a[1] / D});
}

Vec formation_f(const Vec& x, const Vec& a) {
  Vec f(12);
  for (int l = 0; l < 3; ++l) {
    f[4 * l] = x[4 * l + 1];
    f[4 * l + 1] = a[2 * l] * std::cos(a[2 * l + 1]);
    f[4 * l + 2] = x[4 * l + 3];
    f[4 * l + 3] = a[2 * l] * std::sin(a[2 * l + 1]);
  }
  return f;
}

double formation_L(double s, const Vec& x) {
  const double r3 = std::sqrt(3.0);
  const Eigen::Vector2d p1(x[0], x[2]), p2(x[4], x[6]), p3(x[8], x[10]);
  Eigen::Matrix2d R1, R2;
  R1 << 0.5, r3 / 2, -r3 / 2, 0.5;
  R2 << 0.5, -r3 / 2, r3 / 2, 0.5;
  const double e1 = (p1 - Eigen::Vector2d(2.0 * s, 0.0)).norm();
  const double e2 = (p2 - p1 - Eigen::Vector2d(-r3, 1.0)).norm();
  const double e3 = (p3 - R1 * p1 - R2 * p2).norm();
  return std::max({e1, e2, e3});
}

TEST(BuiltinFormulas, AgreeWithModelEquations) {
  std::mt19937_64 rng(3);
  const auto veh = make_builtin("vehicle2d");
  const auto gear = make_builtin("gear4d");
  const auto form = make_builtin("formation12d");
  for (int i = 0; i < 20; ++i) {
    std::uniform_real_distribution<double> s_dist(0.0, 1.0);
    const double s = s_dist(rng);
    const Vec a1 = veh.control_set.random_point(rng);
    const Vec x2 = uniform_vec(rng, 2, -2, 2);
    EXPECT_NEAR((veh.dynamics(s, x2, a1) - vec({std::cos(a1[0]), std::sin(a1[0])})).norm(), 0.0, 1e-12);
    EXPECT_NEAR(veh.terminal_cost(x2), x2.norm(), 1e-12);

    const Vec ag = gear.control_set.random_point(rng);
    const Vec x4 = uniform_vec(rng, 4, -1, 1);
    EXPECT_NEAR((gear.dynamics(s, x4, ag) - gear_f(x4, ag)).norm(), 0.0, 1e-12);
    EXPECT_NEAR(gear.stage_cost(s, x4, ag), ag[1], 1e-12);
    EXPECT_NEAR(gear.terminal_cost(x4), 1000.0 * x4[2], 1e-12);
    EXPECT_NEAR(gear.constraint(s, x4), std::abs(x4[1]) - 0.1, 1e-12);

    const Vec af = form.control_set.random_point(rng);
    const Vec x12 = uniform_vec(rng, 12, -3, 3);
    const double sf = 10.0 * s;
    EXPECT_NEAR((form.dynamics(sf, x12, af) - formation_f(x12, af)).norm(), 0.0, 1e-12);
    EXPECT_NEAR(form.stage_cost(sf, x12, af), formation_L(sf, x12), 1e-12);
    EXPECT_NEAR(form.terminal_cost(x12), 0.0, 1e-12);
  }
}

TEST(BuiltinFormulas, StructuredFormResiduals) {
  std::mt19937_64 rng(5);
  for (const auto& name : builtin_names()) {
    const auto spec = make_builtin(name);
    ASSERT_TRUE(spec.structured.has_value()) << name;
    const auto& sf = *spec.structured;
    std::uniform_real_distribution<double> s_dist(spec.t0, spec.T);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double s = s_dist(rng);
      const Vec x = uniform_vec(rng, spec.state_dim, -3, 3);
      const Vec a = spec.control_set.random_point(rng);
      worst = std::max(worst, (spec.dynamics(s, x, a) - sf.M(s) * x - sf.phi(s, a)).norm());
      worst = std::max(worst, std::abs(spec.stage_cost(s, x, a) - sf.Lx(s, x) - sf.La(s, a)));
    }
    EXPECT_LE(worst, 1e-9) << name;
    const auto diag = check_problem(spec);
    EXPECT_TRUE(diag.ok) << name;
    EXPECT_LE(diag.structured_residual, 1e-9) << name;
  }
}

TEST(BuiltinFormulas, VehicleHasUnitSpeed) {
  const auto spec = make_builtin("vehicle2d");
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Vec a = spec.control_set.random_point(rng);
    EXPECT_NEAR(spec.dynamics(0.0, uniform_vec(rng, 2, -5, 5), a).norm(), 1.0, 1e-14);
  }
  EXPECT_NEAR(check_problem(spec).max_speed, 1.0, 1e-12);
}

TEST(EvalCost, VehicleConstantHeading) {
  const auto spec = make_builtin("vehicle2d");
  const double h = std::atan(0.5);
  const int N = 1000;
  std::vector<double> t(N + 1);
  std::vector<Vec> x(N + 1), a(N, vec({h}));
  for (int k = 0; k <= N; ++k) {
    t[k] = static_cast<double>(k) / N;
    x[k] = spec.initial_state + t[k] * vec({std::cos(h), std::sin(h)});
  }
  EXPECT_NEAR(eval_cost_of_trajectory(spec, t, x, a), std::sqrt(1.25) - 1.0, 1e-4);
}

TEST(EvalCost, ZeroLengthGridGivesTerminalCost) {
  const auto spec = make_builtin("vehicle2d");
  EXPECT_DOUBLE_EQ(eval_cost_of_trajectory(spec, {1.0}, {spec.initial_state}, {}),
                   spec.initial_state.norm());
}

TEST(EvalCost, GearWithoutTorqueCostsNothing) {
  const auto spec = make_builtin("gear4d");
  std::vector<double> t;
  std::vector<Vec> x, a;
  for (int k = 0; k <= 10; ++k) {
    t.push_back(k / 10.0);
    x.push_back(Vec::Zero(4));
    a.push_back(vec({1.0, 0.0}));
  }
  EXPECT_DOUBLE_EQ(eval_cost_of_trajectory(spec, t, x, a), 0.0);
  EXPECT_THROW(eval_cost_of_trajectory(spec, t, x, {}), InvalidArgument);
}

TEST(Diagnostics, ReachableRadiusCoversSpeed) {
  const auto spec = make_builtin("vehicle2d");
  EXPECT_GE(reachable_radius(spec), 1.0 * (spec.T - spec.t0));
}

}  // namespace
}  // namespace laxoc
