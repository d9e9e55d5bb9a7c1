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

#include "laxoc/discretize.hpp"

#include "laxoc/lp.hpp"

#include <algorithm>
#include <cmath>

namespace laxoc {

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2) throw InvalidArgument("time grid: need at least two nodes");
  TimeGrid g;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double d = nodes[k + 1] - nodes[k];
    if (!(d > 0.0)) throw InvalidArgument("time grid: nodes must be strictly increasing");
    g.delta_ = std::max(g.delta_, d);
  }
  g.nodes_ = std::move(nodes);
  return g;
}

TimeGrid make_grid(double t, double T, int K) {
  if (K < 1) throw InvalidArgument("make_grid: K must be at least 1");
  if (!(t < T)) throw InvalidArgument("make_grid: need t < T");
  std::vector<double> nodes(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) nodes[k] = t + (T - t) * static_cast<double>(k) / K;
  nodes.back() = T;
  return TimeGrid::from_nodes(std::move(nodes));
}

double ProgramResiduals::max() const {
  return std::max({dynamics, initial, control_set, state_constraint});
}

int TranscribedProgram::num_variables() const {
  return reduced ? K() * n : (K() + 1) * n + K() * n;
}

int TranscribedProgram::num_cone_constraints() const {
  int count = 0;
  for (const auto& st : steps) {
    for (const auto& a : st.atoms) count += a.is_affine() ? 0 : 1;
  }
  return count;
}

int TranscribedProgram::num_state_constraints() const {
  int count = 0;
  for (const auto& st : steps) count += static_cast<int>(st.state_constraints.size());
  return count;
}

int TranscribedProgram::num_linking_equalities() const {
  int count = 0;
  for (const auto& st : steps) {
    for (const auto& [w, r] : st.equalities) {
      if ((w.transpose() * st.M).cwiseAbs().maxCoeff() > 0.0) ++count;
    }
  }
  return count;
}

std::vector<Vec> TranscribedProgram::states_from_controls(const std::vector<Vec>& beta) const {
  if (static_cast<int>(beta.size()) != K()) {
    throw InvalidArgument("states_from_controls: need one control per step");
  }
  std::vector<Vec> x(beta.size() + 1);
  x[0] = x0;
  for (int k = 0; k < K(); ++k) x[k + 1] = x[k] - beta[k] * steps[k].dt;
  return x;
}

double TranscribedProgram::control_cost(int k, const Vec& y) const {
  const auto& part = steps[k].control;
  switch (part.kind) {
    case ControlPart::Kind::kZero:
      return 0.0;
    case ControlPart::Kind::kAffine:
      return part.coeff.dot(y) + part.constant;
    case ControlPart::Kind::kGenerators:
      break;
  }
  const auto& blk = part.generators;
  const auto J = static_cast<Eigen::Index>(blk.points.size());
  Mat A(n + 1, J);
  for (Eigen::Index j = 0; j < J; ++j) {
    A.col(j).head(n) = blk.points[j];
    A(n, j) = 1.0;
  }
  Vec rhs(n + 1);
  rhs << y, 1.0;
  const auto lp = solve_lp(A, rhs, Eigen::Map<const Vec>(blk.costs.data(), J));
  if (lp.status != LpResult::Status::kOptimal) return std::numeric_limits<double>::infinity();
  return lp.objective;
}

ExtendedReal TranscribedProgram::objective(const std::vector<Vec>& x,
                                           const std::vector<Vec>& beta) const {
  if (static_cast<int>(x.size()) != K() + 1 || static_cast<int>(beta.size()) != K()) {
    throw InvalidArgument("objective: trajectory does not match the grid");
  }
  double total = terminal.value(x.back());
  for (int k = 0; k < K(); ++k) {
    const auto& st = steps[k];
    const Vec y = beta[k] + st.M * x[k];
    double viol = 0.0;
    for (const auto& [w, r] : st.equalities) viol = std::max(viol, std::abs(w.dot(y) - r));
    for (const auto& a : st.atoms) viol = std::max(viol, a.residual(y));
    if (viol > kHullTol) return ExtendedReal::infinity();
    const double cc = control_cost(k, y);
    if (std::isinf(cc)) return ExtendedReal::infinity();
    total += (st.stage.value(x[k]) + cc) * st.dt;
  }
  return ExtendedReal(total);
}

ExtendedReal TranscribedProgram::objective(const std::vector<Vec>& beta) const {
  return objective(states_from_controls(beta), beta);
}

ProgramResiduals TranscribedProgram::residuals(const std::vector<Vec>& x,
                                               const std::vector<Vec>& beta) const {
  ProgramResiduals r;
  r.initial = (x.front() - x0).cwiseAbs().maxCoeff();
  for (int k = 0; k < K(); ++k) {
    const auto& st = steps[k];
    r.dynamics = std::max(r.dynamics,
                          (x[k + 1] - x[k] + beta[k] * st.dt).cwiseAbs().maxCoeff());
    const Vec y = beta[k] + st.M * x[k];
    for (const auto& [w, rhs] : st.equalities) {
      r.control_set = std::max(r.control_set, std::abs(w.dot(y) - rhs));
    }
    for (const auto& a : st.atoms) r.control_set = std::max(r.control_set, a.residual(y));
    if (st.control.kind == ControlPart::Kind::kGenerators && std::isinf(control_cost(k, y))) {
      r.control_set = std::max(r.control_set, 1.0);
    }
    for (const auto& c : st.state_constraints) {
      r.state_constraint = std::max(r.state_constraint, c.residual(x[k]));
    }
  }
  return r;
}

TranscribedProgram transcribe(const ProblemSpec& spec, const TimeGrid& grid,
                              const TranscribeOptions& opts) {
  if (!spec.structured) {
    throw InvalidArgument("transcribe: problem needs a structured form f = M(s)x + phi(s,a)");
  }
  if (std::abs(grid.start() - spec.t0) > 1e-12 || std::abs(grid.end() - spec.T) > 1e-12) {
    throw InvalidArgument("transcribe: grid does not span the problem horizon");
  }
  if (!opts.allow_nonconvex) {
    const auto report = check_convexity_conditions(spec);
    if (report.condition2 == CheckStatus::kFail) {
      throw InvalidArgument("transcribe: convexity conditions for the Lax formula fail");
    }
  }
  TranscribedProgram p;
  p.spec = spec;
  p.grid = grid;
  p.n = spec.state_dim;
  p.x0 = spec.initial_state;
  const auto& sf = *spec.structured;

  if (spec.convex) {
    p.terminal = spec.convex->terminal;
  } else {
    p.terminal.terms.push_back(SmoothTerm{p.n, spec.terminal_cost});
  }
  for (int k = 0; k < grid.K(); ++k) {
    TranscribedStep st;
    st.t = grid.t(k);
    st.dt = grid.step(k);
    st.M = sf.M(st.t);
    if (spec.convex) {
      st.stage = spec.convex->stage(st.t);
      if (spec.convex->constraints) st.state_constraints = spec.convex->constraints(st.t);
    } else {
      const double s = st.t;
      st.stage.terms.push_back(SmoothTerm{p.n, [lx = sf.Lx, s](const Vec& x) { return lx(s, x); }});
      if (spec.has_state_constraint()) {
        st.state_constraints.push_back(ConvexAtom::smooth(
            p.n, [c = spec.state_constraint, s](const Vec& x) { return c(s, x); }));
      }
    }
    st.control = control_part(spec, st.t, opts.max_generators);
    if (spec.builtin != BuiltinId::kNone) {
      auto set = closed_form_control_set(spec, st.t, p.x0);
      st.equalities = std::move(set.equalities);
      st.atoms = std::move(set.inequalities);
    }
    p.steps.push_back(std::move(st));
  }
  return p;
}

TranscribedProgram eliminate_states(TranscribedProgram program) {
  program.reduced = true;
  return program;
}

}  // namespace laxoc
