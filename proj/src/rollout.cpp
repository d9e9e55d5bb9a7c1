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

#include "laxoc/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace laxoc {
namespace {

bool same_control(const Vec& a, const Vec& b) {
  return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= 1e-12;
}

bool stage_cost_control_free(const ProblemSpec& spec, const std::vector<Vec>& sample) {
  if (spec.structured) {
    for (const auto& a : sample) {
      if (std::abs(spec.structured->La(spec.t0, a)) > 1e-12) return false;
    }
    return true;
  }
  const double ref = spec.stage_cost(spec.t0, spec.initial_state, sample.front());
  for (const auto& a : sample) {
    if (std::abs(spec.stage_cost(spec.t0, spec.initial_state, a) - ref) > 1e-12) return false;
  }
  return true;
}

}  // namespace

const Vec& PiecewiseControl::value_at(double t) const {
  if (values.empty()) throw InvalidArgument("value_at: empty control");
  if (t < breakpoints.front() || t > breakpoints.back()) {
    throw InvalidArgument("value_at: time outside the control horizon");
  }
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  const auto i = std::min<std::ptrdiff_t>(it - breakpoints.begin() - 1, pieces() - 1);
  return values[std::max<std::ptrdiff_t>(i, 0)];
}

int PiecewiseControl::switch_count() const {
  int count = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!same_control(values[i - 1], values[i])) ++count;
  }
  return count;
}

double PiecewiseControl::control_set_residual(const ControlSetDescriptor& set) const {
  double worst = 0.0;
  for (const auto& v : values) worst = std::max(worst, set.membership_residual(v));
  return worst;
}

PiecewiseControl synthesize_alpha(const SwitchSchedule& schedule) {
  if (schedule.breakpoints.size() != schedule.controls.size() + 1) {
    throw InvalidArgument("synthesize_alpha: malformed schedule");
  }
  return PiecewiseControl{schedule.breakpoints, schedule.controls};
}

RolloutResult integrate(const ProblemSpec& spec, const PiecewiseControl& ctrl, const Vec& x0,
                        int substeps) {
  if (substeps < 1) throw InvalidArgument("integrate: substeps must be at least 1");
  if (x0.size() != spec.state_dim) throw InvalidArgument("integrate: wrong initial state size");
  if (ctrl.breakpoints.size() != ctrl.values.size() + 1 && !ctrl.values.empty()) {
    throw InvalidArgument("integrate: malformed control");
  }
  RolloutResult r;
  r.times.push_back(ctrl.breakpoints.empty() ? spec.t0 : ctrl.breakpoints.front());
  r.states.push_back(x0);
  double running = 0.0;
  Vec x = x0;
  for (int p = 0; p < ctrl.pieces(); ++p) {
    const double a = ctrl.breakpoints[p], b = ctrl.breakpoints[p + 1];
    if (!(b > a)) continue;
    const Vec& u = ctrl.values[p];
    const double h = (b - a) / substeps;
    for (int i = 0; i < substeps; ++i) {
      const double s = a + i * h;
      running += spec.stage_cost(s, x, u) * h;
      const Vec k1 = spec.dynamics(s, x, u);
      const Vec k2 = spec.dynamics(s + 0.5 * h, x + 0.5 * h * k1, u);
      const Vec k3 = spec.dynamics(s + 0.5 * h, x + 0.5 * h * k2, u);
      const Vec k4 = spec.dynamics(s + h, x + h * k3, u);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!x.allFinite()) throw NumericalError("integrate: state became non-finite");
      r.times.push_back(i + 1 == substeps ? b : s + h);
      r.states.push_back(x);
      r.controls.push_back(u);
    }
  }
  r.cost = running + spec.terminal_cost(x);
  r.switch_count = ctrl.switch_count();
  return r;
}

Vec interpolate(const TimeGrid& grid, const std::vector<Vec>& nodes, double t) {
  if (static_cast<int>(nodes.size()) != grid.K() + 1) {
    throw InvalidArgument("interpolate: one value per grid node is required");
  }
  const auto& ts = grid.nodes();
  if (t <= ts.front()) return nodes.front();
  if (t >= ts.back()) return nodes.back();
  const auto k = static_cast<int>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
  const double w = (t - ts[k]) / (ts[k + 1] - ts[k]);
  return (1.0 - w) * nodes[k] + w * nodes[k + 1];
}

RolloutGaps gaps(const SolveResult& lax, const RolloutResult& rollout, const TimeGrid& grid) {
  RolloutGaps g;
  for (std::size_t i = 0; i < rollout.times.size(); ++i) {
    g.sup_gap = std::max(g.sup_gap,
                         (interpolate(grid, lax.x_star, rollout.times[i]) - rollout.states[i]).norm());
  }
  g.cost_gap = std::abs(lax.objective - rollout.cost);
  return g;
}

GrowthReport check_growth_bound(const ProblemSpec& spec, const RolloutResult& rollout,
                                std::size_t control_samples) {
  GrowthReport rep;
  const auto sample = spec.control_set.sample(control_samples);
  double fmax = 0.0;
  for (std::size_t i = 0; i < rollout.states.size(); ++i) {
    for (const auto& a : sample) {
      fmax = std::max(fmax, spec.dynamics(rollout.times[i], rollout.states[i], a).norm());
    }
    if (i < rollout.controls.size()) {
      fmax = std::max(fmax, spec.dynamics(rollout.times[i], rollout.states[i], rollout.controls[i]).norm());
    }
  }
  rep.constant = 1.1 * fmax;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  const double t = rollout.times.front();
  for (std::size_t i = 0; i < rollout.states.size(); ++i) {
    rep.max_excess = std::max(rep.max_excess, (rollout.states[i] - rollout.states.front()).norm() -
                                                  rep.constant * (rollout.times[i] - t));
  }
  return rep;
}

double max_state_constraint(const ProblemSpec& spec, const RolloutResult& rollout) {
  double worst = -std::numeric_limits<double>::infinity();
  if (!spec.has_state_constraint()) return worst;
  for (std::size_t i = 0; i < rollout.states.size(); ++i) {
    worst = std::max(worst, spec.constraint(rollout.times[i], rollout.states[i]));
  }
  return worst;
}

std::string to_string(MitigationMode m) {
  return m == MitigationMode::kMaxLikelihood ? "max_likelihood" : "min_residual";
}

MitigationMode parse_mitigation_mode(const std::string& name) {
  if (name == "max_likelihood") return MitigationMode::kMaxLikelihood;
  if (name == "min_residual") return MitigationMode::kMinResidual;
  throw InvalidArgument("unknown mitigation mode '" + name + "'");
}

PiecewiseControl mitigate_switching(const ControlDecomposition& decomps, const SolveResult& lax,
                                    const ProblemSpec& spec, const TimeGrid& grid,
                                    MitigationMode mode, std::size_t control_samples) {
  const int K = grid.K();
  if (static_cast<int>(decomps.steps.size()) != K || static_cast<int>(lax.x_star.size()) != K + 1) {
    throw InvalidArgument("mitigate_switching: inputs do not match the grid");
  }
  PiecewiseControl out;
  out.breakpoints = grid.nodes();
  if (mode == MitigationMode::kMaxLikelihood) {
    for (const auto& atoms : decomps.steps) {
      // atoms are sorted by descending weight; the first maximal one wins
      const auto best = std::max_element(
          atoms.begin(), atoms.end(),
          [](const DecompositionAtom& p, const DecompositionAtom& q) { return p.weight < q.weight; });
      out.values.push_back(best->control);
    }
    return out;
  }
  const auto sample = spec.control_set.sample(control_samples);
  if (!stage_cost_control_free(spec, sample)) {
    throw InvalidArgument("mitigate_switching: min_residual needs a control-independent stage cost");
  }
  Vec x = spec.initial_state;
  for (int k = 0; k < K; ++k) {
    const double t = grid.t(k), dt = grid.step(k);
    const Vec target = lax.x_star[k + 1] - x;
    const Vec* best = nullptr;
    double best_r = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vec& a) {
      const double r = (spec.dynamics(t, x, a) * dt - target).norm();
      if (r < best_r) {
        best_r = r;
        best = &a;
      }
    };
    for (const auto& atom : decomps.steps[k]) consider(atom.control);
    for (const auto& a : sample) consider(a);
    out.values.push_back(*best);
    x += spec.dynamics(t, x, *best) * dt;
  }
  return out;
}

}  // namespace laxoc
