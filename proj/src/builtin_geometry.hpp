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

// Closed-form hull geometry of the shipped example systems, shared by the
// transform and decomposition code.

#ifndef LAXOC_SRC_BUILTIN_GEOMETRY_HPP_
#define LAXOC_SRC_BUILTIN_GEOMETRY_HPP_

#include "laxoc/problem.hpp"

#include <cmath>
#include <numbers>

namespace laxoc::detail {

// gear4d in (y2, y4) with y = b + M x. Gear g at full torque gives
// P_g = (-1/D_g, g/D_g), D_g = c1 + c2 g^2. The hull is the triangle
// {0, P_1, P_2}; L^b is linear on both branches and agrees with
// u y2 + v y4 there.
struct GearGeometry {
  double D1 = 0.0;
  double D2 = 0.0;
  Eigen::Vector2d P1;
  Eigen::Vector2d P2;
  double u = 0.0;
  double v = 0.0;
};

inline GearGeometry gear_geometry(const ProblemSpec& spec) {
  const double c1 = spec.params.at("c1"), c2 = spec.params.at("c2");
  GearGeometry g;
  g.D1 = c1 + c2;
  g.D2 = c1 + 4.0 * c2;
  g.P1 = Eigen::Vector2d(-1.0 / g.D1, 1.0 / g.D1);
  g.P2 = Eigen::Vector2d(-1.0 / g.D2, 2.0 / g.D2);
  g.v = g.D2 - g.D1;
  g.u = g.v - g.D1;
  return g;
}

// formation12d, per agent, in (y2, y4): a1 in [-1, 3] and a2 in
// [-pi/6, pi/6] give y = -a1 (cos a2, sin a2).
inline constexpr int kFormationAgents = 3;
inline constexpr double kFormationMaxAccel = 3.0;
inline constexpr double kFormationMinAccel = -1.0;
inline constexpr double kFormationHalfAngle = std::numbers::pi / 6;

// Direction span (angles of y) reached with a1 > 0 and a1 < 0.
inline constexpr double kForwardLo = std::numbers::pi - kFormationHalfAngle;
inline constexpr double kForwardHi = std::numbers::pi + kFormationHalfAngle;
inline constexpr double kReverseLo = -kFormationHalfAngle;
inline constexpr double kReverseHi = kFormationHalfAngle;

}  // namespace laxoc::detail

#endif  // LAXOC_SRC_BUILTIN_GEOMETRY_HPP_
