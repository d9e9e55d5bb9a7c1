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

#ifndef LAXOC_ORACLE_HPP_
#define LAXOC_ORACLE_HPP_

#include "laxoc/discretize.hpp"
#include "laxoc/problem.hpp"

#include <string>
#include <vector>

namespace laxoc {

/// Value function on a regular grid over a box, one slice per time node.
struct GridValueFunction {
  Vec lo;
  Vec hi;
  std::vector<int> resolution;  // nodes per axis
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[k][flat node index]

  int dim() const { return static_cast<int>(resolution.size()); }
  std::size_t num_nodes() const;
  Vec node(std::size_t index) const;
  /// Multilinear interpolation of slice k; +inf outside the box or when a
  /// contributing corner is +inf.
  double value(std::size_t k, const Vec& x) const;
};

struct HjbOptions {
  /// Controls used in the backup; empty means 64 per 1D axis, 16 per axis
  /// for 2D controls (and the set's own sampler otherwise).
  std::vector<Vec> controls;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 0;
};

/// Semi-Lagrangian backward recursion
///   V(t_k, x) = min_a L(t_k,x,a) dt + V(t_{k+1}, x + f(t_k,x,a) dt),
/// V(T, .) = g, with +inf at nodes where c > 0.
/// Requires n <= 3 and a box holding the reachable tube.
GridValueFunction hjb_grid_solve(const ProblemSpec& spec, const Vec& lo, const Vec& hi,
                                 const std::vector<int>& resolution, const TimeGrid& grid,
                                 const HjbOptions& opts = {});

/// Default backup sample described in HjbOptions.
std::vector<Vec> oracle_control_sample(const ControlSetDescriptor& set);

struct BruteForceResult {
  double cost = 0.0;  // +inf if every sequence is infeasible
  std::vector<Vec> sequence;
  long long evaluated = 0;
};

/// Exhaustive search over piecewise-constant control sequences drawn from
/// `controls`, Euler integration on the grid, discarding sequences with
/// c > 0 at any node. Requires |controls|^K <= 1e7.
BruteForceResult brute_force(const ProblemSpec& spec, const TimeGrid& grid,
                             const std::vector<Vec>& controls);

struct OracleComparison {
  double lax = 0.0;
  double oracle = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// |lax - oracle| <= tolerance.
OracleComparison compare(double lax_objective, double oracle_value, double tolerance);
/// lax <= oracle + tolerance, the ordering a restricted-control oracle must obey.
OracleComparison compare_relaxation(double lax_objective, double oracle_value, double tolerance);

/// Node coordinates and value of one slice, as CSV (x_1..x_n, value).
void write_value_slice_csv(const std::string& path, const GridValueFunction& v, std::size_t k);

}  // namespace laxoc

#endif  // LAXOC_ORACLE_HPP_
