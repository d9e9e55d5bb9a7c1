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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace laxoc {
namespace {

double param(const std::map<std::string, double>& p, const std::string& key) {
  return p.at(key);
}

Vec initial_from(const std::map<std::string, double>& p, int n) {
  Vec x0(n);
  for (int i = 0; i < n; ++i) x0[i] = param(p, "x0_" + std::to_string(i + 1));
  return x0;
}

std::map<std::string, double> merged(const std::string& name,
                                     const std::map<std::string, double>& overrides) {
  auto p = builtin_tunables(name);
  for (const auto& [key, value] : overrides) {
    if (!p.count(key)) {
      throw InvalidArgument("builtin " + name + ": '" + key + "' is not a tunable");
    }
    if (!std::isfinite(value)) throw InvalidArgument("builtin " + name + ": non-finite " + key);
    p[key] = value;
  }
  if (!(p.at("t0") < p.at("T"))) throw InvalidArgument("builtin " + name + ": need t0 < T");
  return p;
}

Mat selector(int n, std::initializer_list<int> rows) {
  Mat S = Mat::Zero(static_cast<Eigen::Index>(rows.size()), n);
  int r = 0;
  for (int c : rows) S(r++, c) = 1.0;
  return S;
}

ProblemSpec vehicle2d(const std::map<std::string, double>& p) {
  ProblemSpec spec;
  spec.name = "vehicle2d";
  spec.builtin = BuiltinId::kVehicle2d;
  spec.state_dim = 2;
  spec.control_dim = 1;
  spec.t0 = param(p, "t0");
  spec.T = param(p, "T");
  spec.initial_state = initial_from(p, 2);
  spec.params = p;
  spec.dynamics = [](double, const Vec&, const Vec& a) {
    Vec f(2);
    f << std::cos(a[0]), std::sin(a[0]);
    return f;
  };
  spec.stage_cost = [](double, const Vec&, const Vec&) { return 0.0; };
  spec.terminal_cost = [](const Vec& x) { return x.norm(); };
  spec.control_set = ControlSetDescriptor::box(Vec::Constant(1, -std::numbers::pi),
                                               Vec::Constant(1, std::numbers::pi));
  StructuredForm sf;
  sf.M = [](double) { return Mat::Zero(2, 2); };
  sf.phi = [f = spec.dynamics](double s, const Vec& a) { return f(s, Vec::Zero(2), a); };
  sf.Lx = [](double, const Vec&) { return 0.0; };
  sf.La = [](double, const Vec&) { return 0.0; };
  spec.structured = sf;
  ConvexModel cm;
  cm.stage = [](double) { return CostExpr{}; };
  cm.terminal.terms.push_back(NormTerm{Mat::Identity(2, 2), Vec::Zero(2), 1.0});
  cm.constraints = [](double) { return std::vector<ConvexAtom>{}; };
  spec.convex = cm;
  return spec;
}

ProblemSpec gear4d(const std::map<std::string, double>& p) {
  ProblemSpec spec;
  spec.name = "gear4d";
  spec.builtin = BuiltinId::kGear4d;
  spec.state_dim = 4;
  spec.control_dim = 2;
  spec.t0 = param(p, "t0");
  spec.T = param(p, "T");
  spec.initial_state = initial_from(p, 4);
  spec.params = p;
  const double c1 = param(p, "c1"), c2 = param(p, "c2");
  const double weight = param(p, "terminal_weight");
  const double limit = param(p, "speed_limit");
  if (c1 <= 0.0 || c2 < 0.0) throw InvalidArgument("gear4d: need c1 > 0, c2 >= 0");
  if (limit < 0.0) throw InvalidArgument("gear4d: speed_limit must be non-negative");

  auto phi = [c1, c2](double, const Vec& a) {
    const double g = a[0], tau = a[1];
    const double inertia = c1 + c2 * g * g;
    Vec v = Vec::Zero(4);
    v[1] = tau / inertia;
    v[3] = -g * tau / inertia;
    return v;
  };
  Mat M = Mat::Zero(4, 4);
  M(0, 1) = 1.0;
  M(2, 3) = 1.0;
  spec.dynamics = [M, phi](double s, const Vec& x, const Vec& a) -> Vec {
    return M * x + phi(s, a);
  };
  spec.stage_cost = [](double, const Vec&, const Vec& a) { return a[1]; };
  spec.terminal_cost = [weight](const Vec& x) { return weight * x[2]; };
  spec.state_constraint = [limit](double, const Vec& x) { return std::abs(x[1]) - limit; };
  spec.control_set = ControlSetDescriptor::product(
      {ControlSetDescriptor::finite({Vec::Constant(1, 1.0), Vec::Constant(1, 2.0)}),
       ControlSetDescriptor::box(Vec::Zero(1), Vec::Ones(1))});

  StructuredForm sf;
  sf.M = [M](double) { return M; };
  sf.phi = phi;
  sf.Lx = [](double, const Vec&) { return 0.0; };
  sf.La = [](double, const Vec& a) { return a[1]; };
  spec.structured = sf;

  ConvexModel cm;
  cm.stage = [](double) { return CostExpr{}; };
  Vec e3 = Vec::Zero(4);
  e3[2] = weight;
  cm.terminal.terms.push_back(AffineTerm{e3, 0.0});
  cm.constraints = [limit](double) {
    Vec e2 = Vec::Zero(4);
    e2[1] = 1.0;
    return std::vector<ConvexAtom>{ConvexAtom::affine(e2, -limit),
                                   ConvexAtom::affine(-e2, -limit)};
  };
  spec.convex = cm;
  return spec;
}

ProblemSpec formation12d(const std::map<std::string, double>& p) {
  constexpr int kAgents = 3;
  const int n = 4 * kAgents;
  ProblemSpec spec;
  spec.name = "formation12d";
  spec.builtin = BuiltinId::kFormation12d;
  spec.state_dim = n;
  spec.control_dim = 2 * kAgents;
  spec.t0 = param(p, "t0");
  spec.T = param(p, "T");
  spec.initial_state = initial_from(p, n);
  spec.params = p;
  const double speed = param(p, "reference_speed");

  auto phi = [](double, const Vec& a) {
    Vec v = Vec::Zero(4 * kAgents);
    for (int l = 0; l < kAgents; ++l) {
      v[4 * l + 1] = a[2 * l] * std::cos(a[2 * l + 1]);
      v[4 * l + 3] = a[2 * l] * std::sin(a[2 * l + 1]);
    }
    return v;
  };
  Mat M = Mat::Zero(n, n);
  for (int l = 0; l < kAgents; ++l) {
    M(4 * l, 4 * l + 1) = 1.0;
    M(4 * l + 2, 4 * l + 3) = 1.0;
  }

  // Leader tracks (speed*s, 0); agent 2 keeps offset d from the leader;
  // agent 3 closes the triangle through h(p1, p2) = R1 p1 + R2 p2.
  const double r3 = std::sqrt(3.0);
  Mat S1 = selector(n, {0, 2}), S2 = selector(n, {4, 6}), S3 = selector(n, {8, 10});
  Mat R1(2, 2), R2(2, 2);
  R1 << 0.5, r3 / 2, -r3 / 2, 0.5;
  R2 << 0.5, -r3 / 2, r3 / 2, 0.5;
  Vec d(2);
  d << -r3, 1.0;
  const Mat P2 = S2 - S1;
  const Mat P3 = S3 - R1 * S1 - R2 * S2;
  auto stage_expr = [S1, P2, P3, d, speed](double s) {
    MaxNormTerm term;
    Vec ref(2);
    ref << speed * s, 0.0;
    term.P = {S1, P2, P3};
    term.q = {ref, d, Vec::Zero(2)};
    CostExpr e;
    e.terms.push_back(term);
    return e;
  };
  auto Lx = [stage_expr](double s, const Vec& x) { return stage_expr(s).value(x); };

  spec.dynamics = [M, phi](double s, const Vec& x, const Vec& a) -> Vec {
    return M * x + phi(s, a);
  };
  spec.stage_cost = [Lx](double s, const Vec& x, const Vec&) { return Lx(s, x); };
  spec.terminal_cost = [](const Vec&) { return 0.0; };

  std::vector<ControlSetDescriptor> agents;
  Vec lo(2), hi(2);
  lo << -1.0, -std::numbers::pi / 6;
  hi << 3.0, std::numbers::pi / 6;
  for (int l = 0; l < kAgents; ++l) agents.push_back(ControlSetDescriptor::box(lo, hi));
  spec.control_set = ControlSetDescriptor::product(std::move(agents));

  StructuredForm sf;
  sf.M = [M](double) { return M; };
  sf.phi = phi;
  sf.Lx = Lx;
  sf.La = [](double, const Vec&) { return 0.0; };
  spec.structured = sf;

  ConvexModel cm;
  cm.stage = stage_expr;
  cm.constraints = [](double) { return std::vector<ConvexAtom>{}; };
  spec.convex = cm;
  return spec;
}

}  // namespace

double ProblemSpec::constraint(double s, const Vec& x) const {
  if (!state_constraint) return -std::numeric_limits<double>::infinity();
  return state_constraint(s, x);
}

std::vector<std::string> builtin_names() { return {"vehicle2d", "formation12d", "gear4d"}; }

std::map<std::string, double> builtin_tunables(const std::string& name) {
  if (name == "vehicle2d") {
    return {{"t0", 0.0}, {"T", 1.0}, {"x0_1", -1.0}, {"x0_2", -0.5}};
  }
  if (name == "gear4d") {
    return {{"t0", 0.0},   {"T", 1.0},    {"x0_1", 0.0}, {"x0_2", 0.0},
            {"x0_3", 0.0}, {"x0_4", 0.0}, {"c1", 1.0},   {"c2", 3.0},
            {"terminal_weight", 1000.0},  {"speed_limit", 0.1}};
  }
  if (name == "formation12d") {
    std::map<std::string, double> p{{"t0", 0.0}, {"T", 10.0}, {"reference_speed", 2.0}};
    const double x0[12] = {0.0, 0.0, 0.0, 0.0, -3.0, 0.0, 1.0, 0.0, -1.0, 0.0, -2.0, 0.0};
    for (int i = 0; i < 12; ++i) p["x0_" + std::to_string(i + 1)] = x0[i];
    return p;
  }
  throw InvalidArgument("unknown builtin problem '" + name + "'");
}

ProblemSpec make_builtin(const std::string& name,
                         const std::map<std::string, double>& overrides) {
  const auto p = merged(name, overrides);
  if (name == "vehicle2d") return vehicle2d(p);
  if (name == "gear4d") return gear4d(p);
  return formation12d(p);
}

double eval_cost_of_trajectory(const ProblemSpec& spec, const std::vector<double>& times,
                               const std::vector<Vec>& states,
                               const std::vector<Vec>& controls) {
  if (times.empty()) throw InvalidArgument("eval_cost_of_trajectory: empty grid");
  if (states.size() != times.size()) {
    throw InvalidArgument("eval_cost_of_trajectory: state samples do not match the grid");
  }
  const std::size_t steps = times.size() - 1;
  if (controls.size() != times.size() && controls.size() != steps) {
    throw InvalidArgument("eval_cost_of_trajectory: control samples do not match the grid");
  }
  double cost = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double dt = times[k + 1] - times[k];
    if (!(dt > 0.0)) throw InvalidArgument("eval_cost_of_trajectory: grid not increasing");
    cost += spec.stage_cost(times[k], states[k], controls[k]) * dt;
  }
  return cost + spec.terminal_cost(states.back());
}

double reachable_radius(const ProblemSpec& spec) {
  double speed = 0.0;
  for (const auto& a : spec.control_set.sample(2000)) {
    speed = std::max(speed, spec.dynamics(spec.t0, spec.initial_state, a).norm());
  }
  return 1.0 + speed * (spec.T - spec.t0);
}

ProblemDiagnostics check_problem(const ProblemSpec& spec, std::uint64_t seed) {
  ProblemDiagnostics d;
  const int n = spec.state_dim;
  if (n <= 0 || spec.control_dim != spec.control_set.dim() ||
      spec.initial_state.size() != n || !spec.dynamics || !spec.stage_cost ||
      !spec.terminal_cost) {
    d.ok = false;
    d.messages.push_back("problem data incomplete or dimensions inconsistent");
    return d;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> time(spec.t0, spec.T);
  const double radius = reachable_radius(spec);
  auto state = [&] {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = spec.initial_state[i] + radius * unit(rng);
    return x;
  };

  d.min_stage_cost = std::numeric_limits<double>::infinity();
  d.min_terminal_cost = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double s = time(rng);
    const Vec x = state(), y = state();
    const Vec a = spec.control_set.random_point(rng);
    const double dx = (x - y).norm();
    if (dx == 0.0) continue;
    const double lx = spec.stage_cost(s, x, a), ly = spec.stage_cost(s, y, a);
    d.min_stage_cost = std::min({d.min_stage_cost, lx, ly});
    const double gx = spec.terminal_cost(x), gy = spec.terminal_cost(y);
    d.min_terminal_cost = std::min({d.min_terminal_cost, gx, gy});
    const Vec fx = spec.dynamics(s, x, a);
    d.max_speed = std::max(d.max_speed, fx.norm());
    d.lipschitz_f = std::max(d.lipschitz_f, (fx - spec.dynamics(s, y, a)).norm() / dx);
    d.lipschitz_L = std::max(d.lipschitz_L, std::abs(lx - ly) / dx);
    d.lipschitz_g = std::max(d.lipschitz_g, std::abs(gx - gy) / dx);
    if (spec.has_state_constraint()) {
      d.lipschitz_c = std::max(
          d.lipschitz_c, std::abs(spec.constraint(s, x) - spec.constraint(s, y)) / dx);
    }
  }
  for (double v : {d.min_stage_cost, d.min_terminal_cost, d.lipschitz_f, d.lipschitz_L,
                   d.lipschitz_g, d.lipschitz_c}) {
    if (!std::isfinite(v)) {
      d.ok = false;
      d.messages.push_back("non-finite sampled cost bound or Lipschitz ratio");
      break;
    }
  }

  if (!spec.structured) {
    d.structured_residual = std::numeric_limits<double>::quiet_NaN();
    return d;
  }
  const auto& sf = *spec.structured;
  double worst = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double s = time(rng);
    const Vec x = state();
    const Vec a = spec.control_set.random_point(rng);
    const Vec f = spec.dynamics(s, x, a);
    worst = std::max(worst, (f - sf.M(s) * x - sf.phi(s, a)).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(spec.stage_cost(s, x, a) - sf.Lx(s, x) - sf.La(s, a)));
  }
  d.structured_residual = worst;
  if (worst > 1e-9) {
    d.ok = false;
    d.messages.push_back("structured form does not reproduce f or L");
  }
  return d;
}

}  // namespace laxoc
