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

// Shared helpers for the unit tests.

#ifndef LAXOC_TESTS_TEST_UTIL_HPP_
#define LAXOC_TESTS_TEST_UTIL_HPP_

#include "laxoc/problem.hpp"
#include "laxoc/types.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace laxoc::testing {

inline Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline Vec uniform_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

/// x' = x + a, L = |x|^2 + |a|^2, g = 0, A = [-1,1]^2.
inline ProblemSpec affine_toy() {
  ProblemSpec spec;
  spec.name = "affine_toy";
  spec.state_dim = 2;
  spec.control_dim = 2;
  spec.t0 = 0.0;
  spec.T = 1.0;
  spec.initial_state = vec({0.5, -0.25});
  spec.dynamics = [](double, const Vec& x, const Vec& a) -> Vec { return x + a; };
  spec.stage_cost = [](double, const Vec& x, const Vec& a) { return x.squaredNorm() + a.squaredNorm(); };
  spec.terminal_cost = [](const Vec&) { return 0.0; };
  spec.control_set = ControlSetDescriptor::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
  StructuredForm sf;
  sf.M = [](double) -> Mat { return Mat::Identity(2, 2); };
  sf.phi = [](double, const Vec& a) -> Vec { return a; };
  sf.Lx = [](double, const Vec& x) { return x.squaredNorm(); };
  sf.La = [](double, const Vec& a) { return a.squaredNorm(); };
  spec.structured = sf;
  return spec;
}

/// Planar unit-speed vehicle written as a custom problem (no built-in tag).
inline ProblemSpec custom_vehicle() {
  ProblemSpec spec;
  spec.name = "custom_vehicle";
  spec.state_dim = 2;
  spec.control_dim = 1;
  spec.t0 = 0.0;
  spec.T = 1.0;
  spec.initial_state = vec({-1.0, -0.5});
  auto f = [](double, const Vec&, const Vec& a) -> Vec { return vec({std::cos(a[0]), std::sin(a[0])}); };
  spec.dynamics = f;
  spec.stage_cost = [](double, const Vec&, const Vec&) { return 0.0; };
  spec.terminal_cost = [](const Vec& x) { return x.norm(); };
  spec.control_set = ControlSetDescriptor::box(Vec::Constant(1, -std::numbers::pi),
                                               Vec::Constant(1, std::numbers::pi));
  StructuredForm sf;
  sf.M = [](double) -> Mat { return Mat::Zero(2, 2); };
  sf.phi = [f](double s, const Vec& a) { return f(s, Vec::Zero(2), a); };
  sf.Lx = [](double, const Vec&) { return 0.0; };
  sf.La = [](double, const Vec&) { return 0.0; };
  spec.structured = sf;
  return spec;
}

}  // namespace laxoc::testing

#endif  // LAXOC_TESTS_TEST_UTIL_HPP_
