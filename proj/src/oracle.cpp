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

#include "laxoc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <thread>

namespace laxoc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers == 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk, end = std::min(count, begin + chunk);
    if (begin < end) pool.emplace_back(body, begin, end);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::size_t GridValueFunction::num_nodes() const {
  std::size_t n = 1;
  for (int r : resolution) n *= static_cast<std::size_t>(r);
  return n;
}

Vec GridValueFunction::node(std::size_t index) const {
  Vec x(dim());
  for (int d = 0; d < dim(); ++d) {
    const auto i = index % static_cast<std::size_t>(resolution[d]);
    index /= static_cast<std::size_t>(resolution[d]);
    x[d] = lo[d] + (hi[d] - lo[d]) * static_cast<double>(i) / (resolution[d] - 1);
  }
  return x;
}

double GridValueFunction::value(std::size_t k, const Vec& x) const {
  const int n = dim();
  const auto& slice = values.at(k);
  std::size_t base = 0, stride = 1;
  double frac[3] = {0.0, 0.0, 0.0};
  std::size_t strides[3] = {0, 0, 0};
  for (int d = 0; d < n; ++d) {
    const double h = (hi[d] - lo[d]) / (resolution[d] - 1);
    const double u = (x[d] - lo[d]) / h;
    if (!(u >= -1e-12 && u <= resolution[d] - 1 + 1e-12)) return kInf;
    auto i = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, resolution[d] - 2.0));
    frac[d] = std::clamp(u - static_cast<double>(i), 0.0, 1.0);
    base += i * stride;
    strides[d] = stride;
    stride *= static_cast<std::size_t>(resolution[d]);
  }
  double v = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1.0;
    std::size_t idx = base;
    for (int d = 0; d < n; ++d) {
      if (corner & (1 << d)) {
        w *= frac[d];
        idx += strides[d];
      } else {
        w *= 1.0 - frac[d];
      }
    }
    if (w == 0.0) continue;
    const double c = slice[idx];
    if (std::isinf(c)) return kInf;
    v += w * c;
  }
  return v;
}

std::vector<Vec> oracle_control_sample(const ControlSetDescriptor& set) {
  const int axes = set.box_axes();
  if (axes == 1) return set.sample_per_axis(64);
  if (axes == 2) return set.sample_per_axis(16);
  return set.sample();
}

GridValueFunction hjb_grid_solve(const ProblemSpec& spec, const Vec& lo, const Vec& hi,
                                 const std::vector<int>& resolution, const TimeGrid& grid,
                                 const HjbOptions& opts) {
  const int n = spec.state_dim;
  if (n > 3) throw InvalidArgument("hjb_grid_solve: grid oracle supports at most 3 states");
  if (lo.size() != n || hi.size() != n || static_cast<int>(resolution.size()) != n) {
    throw InvalidArgument("hjb_grid_solve: box and resolution need the state dimension");
  }
  for (int d = 0; d < n; ++d) {
    if (!(hi[d] > lo[d]) || resolution[d] < 2) {
      throw InvalidArgument("hjb_grid_solve: empty box or fewer than 2 nodes on an axis");
    }
  }
  const auto controls = opts.controls.empty() ? oracle_control_sample(spec.control_set) : opts.controls;

  // Reachable tube from the initial state must stay in the box.
  double C = 0.0;
  for (const auto& a : controls) C = std::max(C, spec.dynamics(grid.start(), spec.initial_state, a).norm());
  const double reach = C * (grid.end() - grid.start());
  for (int d = 0; d < n; ++d) {
    if (spec.initial_state[d] - reach < lo[d] - 1e-12 || spec.initial_state[d] + reach > hi[d] + 1e-12) {
      throw InvalidArgument("hjb_grid_solve: box does not contain the reachable tube");
    }
  }

  GridValueFunction v;
  v.lo = lo;
  v.hi = hi;
  v.resolution = resolution;
  v.times = grid.nodes();
  const std::size_t N = v.num_nodes();
  const int K = grid.K();
  v.values.assign(K + 1, std::vector<double>(N, kInf));
  std::vector<Vec> nodes(N);
  for (std::size_t i = 0; i < N; ++i) nodes[i] = v.node(i);

  const bool constrained = spec.has_state_constraint();
  for (std::size_t i = 0; i < N; ++i) {
    if (constrained && spec.constraint(grid.end(), nodes[i]) > 0.0) continue;
    v.values[K][i] = spec.terminal_cost(nodes[i]);
  }
  const int threads = opts.threads > 0 ? opts.threads
                                       : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (int k = K - 1; k >= 0; --k) {
    const double t = grid.t(k), dt = grid.step(k);
    auto& out = v.values[k];
    parallel_for(N, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Vec& x = nodes[i];
        if (constrained && spec.constraint(t, x) > 0.0) continue;
        double best = kInf;
        for (const auto& a : controls) {
          const double next = v.value(k + 1, x + dt * spec.dynamics(t, x, a));
          if (std::isinf(next)) continue;
          best = std::min(best, spec.stage_cost(t, x, a) * dt + next);
        }
        out[i] = best;
      }
    });
  }
  return v;
}

BruteForceResult brute_force(const ProblemSpec& spec, const TimeGrid& grid,
                             const std::vector<Vec>& controls) {
  if (controls.empty()) throw InvalidArgument("brute_force: empty control sample");
  const int K = grid.K();
  if (K * std::log10(static_cast<double>(controls.size())) > 7.0 + 1e-12) {
    throw InvalidArgument("brute_force: more than 1e7 sequences");
  }
  BruteForceResult best;
  best.cost = kInf;
  std::vector<int> choice(K, 0);
  const bool constrained = spec.has_state_constraint();

  // depth-first over sequences; states and running costs kept per level
  std::vector<Vec> x(K + 1);
  std::vector<double> run(K + 1, 0.0);
  x[0] = spec.initial_state;
  if (constrained && spec.constraint(grid.t(0), x[0]) > 0.0) return best;
  if (K == 0) {
    best.cost = spec.terminal_cost(x[0]);
    return best;
  }
  int level = 0;
  choice[0] = -1;
  while (level >= 0) {
    if (++choice[level] >= static_cast<int>(controls.size())) {
      --level;
      continue;
    }
    const double t = grid.t(level), dt = grid.step(level);
    const Vec& a = controls[choice[level]];
    x[level + 1] = x[level] + dt * spec.dynamics(t, x[level], a);
    run[level + 1] = run[level] + spec.stage_cost(t, x[level], a) * dt;
    if (constrained && spec.constraint(grid.t(level + 1), x[level + 1]) > 0.0) continue;
    if (level + 1 < K) {
      ++level;
      choice[level] = -1;
      continue;
    }
    ++best.evaluated;
    const double total = run[K] + spec.terminal_cost(x[K]);
    if (total < best.cost) {
      best.cost = total;
      best.sequence.clear();
      for (int j = 0; j < K; ++j) best.sequence.push_back(controls[choice[j]]);
    }
  }
  return best;
}

OracleComparison compare(double lax_objective, double oracle_value, double tolerance) {
  if (!std::isfinite(lax_objective) || !std::isfinite(oracle_value)) {
    throw InvalidArgument("compare: values must be finite");
  }
  OracleComparison c{lax_objective, oracle_value, std::abs(lax_objective - oracle_value), tolerance, false};
  c.pass = c.gap <= tolerance;
  return c;
}

OracleComparison compare_relaxation(double lax_objective, double oracle_value, double tolerance) {
  if (!std::isfinite(lax_objective) || !std::isfinite(oracle_value)) {
    throw InvalidArgument("compare_relaxation: values must be finite");
  }
  OracleComparison c{lax_objective, oracle_value, lax_objective - oracle_value, tolerance, false};
  c.pass = c.gap <= tolerance;
  return c;
}

void write_value_slice_csv(const std::string& path, const GridValueFunction& v, std::size_t k) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  for (int d = 0; d < v.dim(); ++d) out << "x_" << d + 1 << ",";
  out << "value\n";
  for (std::size_t i = 0; i < v.num_nodes(); ++i) {
    const Vec x = v.node(i);
    for (int d = 0; d < v.dim(); ++d) out << x[d] << ",";
    out << v.values.at(k)[i] << "\n";
  }
}

}  // namespace laxoc
