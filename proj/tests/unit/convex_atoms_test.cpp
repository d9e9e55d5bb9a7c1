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

#include "laxoc/convex_atoms.hpp"

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

// Support-function form of the arc set, by dense angle sampling.
double arc_support_excess(const Vec& y, double radius, double lo, double hi) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 20000; ++i) {
    const double th = lo + (hi - lo) * i / 20000.0;
    best = std::max(best, y[0] * std::cos(th) + y[1] * std::sin(th));
  }
  return best - radius;
}

TEST(ConvexAtom, NormBallResidualIsDistance) {
  const auto ball = ConvexAtom::norm_ball(Mat::Identity(2, 2), vec({1.0, 0.0}), 2.0);
  EXPECT_NEAR(ball.residual(vec({4.0, 0.0})), 1.0, 1e-14);
  EXPECT_NEAR(ball.residual(vec({1.0, 0.0})), -2.0, 1e-14);
  const Vec p = ball.project(vec({1.0, 5.0}));
  EXPECT_NEAR((p - vec({1.0, 2.0})).norm(), 0.0, 1e-12);
}

TEST(ConvexAtom, AffineResidualAndProjection) {
  const auto h = ConvexAtom::affine(vec({3.0, 4.0}), -5.0);
  EXPECT_NEAR(h.residual(vec({3.0, 4.0})), 20.0, 1e-12);
  const Vec p = h.project(vec({3.0, 4.0}));
  EXPECT_NEAR(vec({3.0, 4.0}).dot(p) - 5.0, 0.0, 1e-12);
  EXPECT_TRUE(h.is_affine());
}

TEST(ConvexAtom, ArcMatchesSupportFunction) {
  std::mt19937_64 rng(4);
  const double lo = 5 * kPi / 6, hi = 7 * kPi / 6;
  const auto arc = ConvexAtom::arc(2, 0, 1, 3.0, lo, hi);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const Vec y = uniform_vec(rng, 2, -5, 5);
    const double oracle = arc_support_excess(y, 3.0, lo, hi);
    if (std::abs(oracle) < 1e-3) continue;
    ++checked;
    EXPECT_EQ(arc.residual(y) > 0.0, oracle > 0.0) << y.transpose();
    EXPECT_EQ(arc.surrogate_value(y) > 0.0, oracle > 0.0) << y.transpose();
  }
  EXPECT_GT(checked, 300);
}

TEST(ConvexAtom, ProjectionLandsInsideAndIsNearest) {
  std::mt19937_64 rng(8);
  const auto arc = ConvexAtom::arc(2, 0, 1, 1.0, -kPi / 6, kPi / 6);
  for (int i = 0; i < 50; ++i) {
    const Vec y = uniform_vec(rng, 2, -3, 3);
    const Vec p = arc.project(y);
    EXPECT_LE(arc.residual(p), 1e-9);
    // no sampled member of the set is closer
    for (int j = 0; j < 200; ++j) {
      const Vec z = uniform_vec(rng, 2, -3, 3);
      if (arc.residual(z) <= 0.0) {
        EXPECT_GE((z - y).norm(), (p - y).norm() - 1e-9);
      }
    }
  }
}

TEST(ConvexAtom, SubgradientInequalityHolds) {
  std::mt19937_64 rng(12);
  const std::vector<ConvexAtom> atoms{
      ConvexAtom::norm_ball(Mat::Identity(2, 2), vec({0.5, 0.5}), 1.0),
      ConvexAtom::affine(vec({1.0, -2.0}), 0.3),
      ConvexAtom::arc(2, 0, 1, 3.0, 5 * kPi / 6, 7 * kPi / 6),
      ConvexAtom::smooth(2, [](const Vec& y) { return y.squaredNorm() - 1.0; })};
  for (const auto& atom : atoms) {
    for (int i = 0; i < 200; ++i) {
      const Vec y = uniform_vec(rng, 2, -4, 4);
      const Vec z = uniform_vec(rng, 2, -4, 4);
      const Vec g = atom.subgradient(y);
      EXPECT_GE(atom.surrogate_value(z), atom.surrogate_value(y) + atom.surrogate(y).grad.dot(z - y) - 1e-6);
      if (atom.residual(y) > 1e-6 && !std::holds_alternative<SmoothAtom>(atom.kind())) {
        EXPECT_GE(atom.residual(z), atom.residual(y) + g.dot(z - y) - 1e-6);
      }
    }
  }
}

TEST(ConvexAtom, SurrogateDerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(2);
  const auto ball = ConvexAtom::norm_ball(Mat::Identity(2, 2), vec({0.1, -0.2}), 1.5);
  for (int i = 0; i < 20; ++i) {
    const Vec y = uniform_vec(rng, 2, -2, 2);
    const auto ev = ball.surrogate(y);
    const auto fd = finite_difference([&](const Vec& v) { return ball.surrogate_value(v); }, y);
    EXPECT_NEAR((ev.grad - fd.grad).norm(), 0.0, 1e-5);
    EXPECT_NEAR((ev.hess - fd.hess).norm(), 0.0, 1e-3);
  }
}

TEST(CostExpr, MaxNormValueAndSubgradient) {
  MaxNormTerm term;
  term.P = {Mat::Identity(2, 2), -Mat::Identity(2, 2)};
  term.q = {vec({1.0, 0.0}), vec({0.0, 2.0})};
  CostExpr e;
  e.terms.push_back(term);
  e.terms.push_back(AffineTerm{vec({1.0, 1.0}), 0.5});
  const Vec x = vec({0.0, 0.0});
  EXPECT_NEAR(e.value(x), 2.0 + 0.5, 1e-14);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    const Vec y = uniform_vec(rng, 2, -3, 3);
    const Vec z = uniform_vec(rng, 2, -3, 3);
    EXPECT_GE(e.value(z), e.value(y) + e.subgradient(y).dot(z - y) - 1e-10);
  }
}

}  // namespace
}  // namespace laxoc
