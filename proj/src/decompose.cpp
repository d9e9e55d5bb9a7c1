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

#include "laxoc/decompose.hpp"

#include "builtin_geometry.hpp"
#include "laxoc/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace laxoc {
namespace {

constexpr double kPrune = 1e-10;
constexpr double kSnap = 1e-12;

// A decomposition of one factor of the control set: values for the control
// entries at `coords`, with weights.
struct FactorPiece {
  Vec control;
  double weight = 0.0;
};
struct Factor {
  std::vector<int> coords;
  std::vector<FactorPiece> pieces;
};

Vec two(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Factor vehicle_factor(const Vec& y) {
  Factor f;
  f.coords = {0};
  const double r = y.norm();
  auto heading = [](const Eigen::Vector2d& u) {
    return Vec::Constant(1, std::atan2(-u[1], -u[0]));
  };
  if (r >= 1.0 - kSnap) {
    f.pieces.push_back({heading(y.head<2>() / r), 1.0});
    return f;
  }
  // antipodal pair through b: b = g u + (1 - g)(-u) with g = (1 + |b|)/2
  const Eigen::Vector2d u = r > 0.0 ? Eigen::Vector2d(y.head<2>() / r) : Eigen::Vector2d(1.0, 0.0);
  const double g = 0.5 * (1.0 + r);
  f.pieces.push_back({heading(u), g});
  f.pieces.push_back({heading(-u), 1.0 - g});
  return f;
}

Factor gear_factor(const ProblemSpec& spec, const Vec& y) {
  const auto geo = detail::gear_geometry(spec);
  Factor f;
  f.coords = {0, 1};
  // y = g P1 + m P2; P1 at full torque in gear 1, m P2 on the gear-2 segment
  Eigen::Matrix2d P;
  P.col(0) = geo.P1;
  P.col(1) = geo.P2;
  const Eigen::Vector2d w = P.partialPivLu().solve(Eigen::Vector2d(y[1], y[3]));
  const double g = std::clamp(w[0], 0.0, 1.0), m = std::max(w[1], 0.0);
  if (m <= kSnap) {
    f.pieces.push_back({two(1.0, std::min(g, 1.0)), 1.0});
  } else if (g <= kSnap) {
    f.pieces.push_back({two(2.0, std::min(m, 1.0)), 1.0});
  } else if (g >= 1.0 - kSnap) {
    f.pieces.push_back({two(1.0, 1.0), 1.0});
  } else {
    f.pieces.push_back({two(1.0, 1.0), g});
    f.pieces.push_back({two(2.0, std::min(m / (1.0 - g), 1.0)), 1.0 - g});
  }
  return f;
}

// One formation agent, y = (y2, y4) = -a1 (cos a2, sin a2).
Factor formation_factor(int agent, const Eigen::Vector2d& y) {
  Factor f;
  f.coords = {2 * agent, 2 * agent + 1};
  const double h = detail::kFormationHalfAngle;
  const double r = y.norm();
  const double tol = 1e-12;
  if (r <= tol) {
    f.pieces.push_back({two(0.0, 0.0), 1.0});
    return f;
  }
  if (y[0] < 0.0 && std::abs(std::atan2(y[1], -y[0])) <= h + tol &&
      r <= detail::kFormationMaxAccel + tol) {
    f.pieces.push_back({two(std::min(r, detail::kFormationMaxAccel),
                            std::clamp(std::atan2(-y[1], -y[0]), -h, h)),
                        1.0});
    return f;
  }
  if (y[0] > 0.0 && std::abs(std::atan2(y[1], y[0])) <= h + tol &&
      r <= -detail::kFormationMinAccel + tol) {
    f.pieces.push_back({two(-std::min(r, -detail::kFormationMinAccel),
                            std::clamp(std::atan2(y[1], y[0]), -h, h)),
                        1.0});
    return f;
  }
  // Gap between the two sectors: the line from the far arc end point E
  // through y meets the reverse ray at radius m / (1 - g).
  const double side = y[1] >= 0.0 ? 1.0 : -1.0;
  const Eigen::Vector2d E = detail::kFormationMaxAccel * Eigen::Vector2d(-std::cos(h), side * std::sin(h));
  const Eigen::Vector2d u(std::cos(h), side * std::sin(h));
  Eigen::Matrix2d P;
  P.col(0) = E;
  P.col(1) = u;
  const Eigen::Vector2d w = P.partialPivLu().solve(y);
  const double g = std::clamp(w[0], 0.0, 1.0), m = std::max(w[1], 0.0);
  const Vec forward = two(detail::kFormationMaxAccel, -side * h);
  if (g >= 1.0 - kSnap) {
    f.pieces.push_back({forward, 1.0});
    return f;
  }
  const double radius = std::min(m / (1.0 - g), -detail::kFormationMinAccel);
  f.pieces.push_back({forward, g});
  f.pieces.push_back({two(-radius, side * h), 1.0 - g});
  return f;
}

// Joint atoms from per-factor weight lists: walk the cumulative weights of
// every factor together, so each joint atom has one piece per factor.
std::vector<std::pair<Vec, double>> merge_factors(const std::vector<Factor>& factors, int m) {
  std::vector<std::pair<Vec, double>> out;
  std::vector<std::size_t> idx(factors.size(), 0);
  std::vector<double> left(factors.size());
  for (std::size_t b = 0; b < factors.size(); ++b) left[b] = factors[b].pieces.front().weight;
  for (;;) {
    double w = std::numeric_limits<double>::infinity();
    for (double l : left) w = std::min(w, l);
    Vec a = Vec::Zero(m);
    for (std::size_t b = 0; b < factors.size(); ++b) {
      const auto& piece = factors[b].pieces[idx[b]];
      for (std::size_t i = 0; i < factors[b].coords.size(); ++i) a[factors[b].coords[i]] = piece.control[i];
    }
    if (w > 0.0) out.emplace_back(std::move(a), w);
    bool done = true;
    for (std::size_t b = 0; b < factors.size(); ++b) {
      left[b] -= w;
      if (left[b] <= 1e-15 && idx[b] + 1 < factors[b].pieces.size()) {
        ++idx[b];
        left[b] += factors[b].pieces[idx[b]].weight;
      }
      if (idx[b] + 1 < factors[b].pieces.size() || left[b] > 1e-15) done = false;
    }
    if (done) break;
  }
  return out;
}

std::vector<Factor> closed_form_factors(const ProblemSpec& spec, double s, const Vec& x,
                                        const Vec& b) {
  const Vec y = b + spec.structured->M(s) * x;
  std::vector<Factor> factors;
  switch (spec.builtin) {
    case BuiltinId::kVehicle2d:
      factors.push_back(vehicle_factor(y));
      break;
    case BuiltinId::kGear4d:
      factors.push_back(gear_factor(spec, y));
      break;
    case BuiltinId::kFormation12d:
      for (int l = 0; l < detail::kFormationAgents; ++l) {
        factors.push_back(formation_factor(l, Eigen::Vector2d(y[4 * l + 1], y[4 * l + 3])));
      }
      break;
    case BuiltinId::kNone:
      break;
  }
  return factors;
}

std::vector<Factor> lp_factors(const ProblemSpec& spec, double s, const Vec& x, const Vec& b) {
  const auto set = conv_control_set(spec, s, x);
  const auto lp = solve_hull_lp(set, b);
  if (!lp.feasible || lp.infeasibility > kHullTol) {
    throw InvalidArgument("decompose_control: b is outside Conv(B(s,x))");
  }
  std::vector<Factor> factors;
  for (std::size_t k = 0; k < set.generators.size(); ++k) {
    const auto& blk = set.generators[k];
    Factor f;
    f.coords = blk.control_coords;
    double total = 0.0;
    for (const auto& [j, w] : lp.weights[k]) total += w;
    for (const auto& [j, w] : lp.weights[k]) f.pieces.push_back({blk.controls[j], w / total});
    factors.push_back(std::move(f));
  }
  return factors;
}

}  // namespace

std::string to_string(DecomposeMode m) {
  return m == DecomposeMode::kClosedForm ? "closed_form" : "lp";
}

DecomposeMode parse_decompose_mode(const std::string& name) {
  if (name == "closed_form") return DecomposeMode::kClosedForm;
  if (name == "lp") return DecomposeMode::kLp;
  throw InvalidArgument("unknown decomposition mode '" + name + "'");
}

std::vector<DecompositionAtom> decompose_control(const ProblemSpec& spec, double s, const Vec& x,
                                                 const Vec& b, DecomposeMode mode) {
  if (b.size() != spec.state_dim || x.size() != spec.state_dim || !b.allFinite()) {
    throw InvalidArgument("decompose_control: b and x need the state dimension");
  }
  std::vector<Factor> factors;
  if (mode == DecomposeMode::kClosedForm && spec.builtin != BuiltinId::kNone) {
    const auto set = closed_form_control_set(spec, s, x);
    if (set.atom_residual(b) > kHullTol) {
      throw InvalidArgument("decompose_control: b is outside Conv(B(s,x))");
    }
    factors = closed_form_factors(spec, s, x, b);
  } else {
    factors = lp_factors(spec, s, x, b);
  }
  for (auto& f : factors) {
    std::stable_sort(f.pieces.begin(), f.pieces.end(),
                     [](const FactorPiece& p, const FactorPiece& q) { return p.weight > q.weight; });
  }
  auto merged = merge_factors(factors, spec.control_dim);

  std::stable_sort(merged.begin(), merged.end(),
                   [](const auto& p, const auto& q) { return p.second > q.second; });
  std::erase_if(merged, [](const auto& p) { return p.second < kPrune; });
  long double total = 0.0L;
  for (const auto& p : merged) total += p.second;
  std::vector<DecompositionAtom> atoms;
  for (auto& [a, w] : merged) {
    DecompositionAtom atom;
    atom.velocity = -spec.dynamics(s, x, a);
    atom.control = std::move(a);
    atom.weight = static_cast<double>(w / total);
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

ControlDecomposition decompose_trajectory(const ProblemSpec& spec, const TimeGrid& grid,
                                          const std::vector<Vec>& x, const std::vector<Vec>& beta,
                                          DecomposeMode mode) {
  if (static_cast<int>(beta.size()) != grid.K() || x.size() < beta.size()) {
    throw InvalidArgument("decompose_trajectory: trajectory does not match the grid");
  }
  ControlDecomposition d;
  d.steps.resize(beta.size());
  for (int k = 0; k < grid.K(); ++k) d.steps[k] = decompose_control(spec, grid.t(k), x[k], beta[k], mode);
  return d;
}

DecompositionCheck check_decomposition(const ProblemSpec& spec, double s, const Vec& x,
                                       const Vec& b, const std::vector<DecompositionAtom>& atoms) {
  DecompositionCheck c;
  if (atoms.empty()) throw InvalidArgument("check_decomposition: no atoms");
  c.min_weight = atoms.front().weight;
  long double sum = 0.0L, cost = 0.0L;
  Vec recon = Vec::Zero(b.size());
  for (const auto& a : atoms) {
    c.min_weight = std::min(c.min_weight, a.weight);
    sum += a.weight;
    recon += a.weight * a.velocity;
    c.dynamics = std::max(c.dynamics, (a.velocity + spec.dynamics(s, x, a.control)).norm());
    cost += static_cast<long double>(a.weight) * spec.stage_cost(s, x, a.control);
    c.control_set = std::max(c.control_set, spec.control_set.membership_residual(a.control));
  }
  c.weight_sum_error = std::abs(static_cast<double>(sum - 1.0L));
  c.reconstruction = (recon - b).norm();
  const auto h = hstar(spec, s, x, b);
  c.cost = h.is_finite() ? std::abs(static_cast<double>(cost) - h.value())
                         : std::numeric_limits<double>::infinity();
  return c;
}

SwitchSchedule switch_schedule(const TimeGrid& grid, const ControlDecomposition& decomps) {
  if (static_cast<int>(decomps.steps.size()) != grid.K()) {
    throw InvalidArgument("switch_schedule: one decomposition per step is required");
  }
  SwitchSchedule out;
  out.breakpoints.push_back(grid.t(0));
  for (int k = 0; k < grid.K(); ++k) {
    const auto& atoms = decomps.steps[k];
    const long double t0 = grid.t(k), dt = grid.step(k);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].weight <= 0.0) continue;
      acc += atoms[i].weight;
      const bool last = i + 1 == atoms.size();
      const double end = last ? grid.t(k + 1) : static_cast<double>(t0 + acc * dt);
      if (!last && !(end > out.breakpoints.back())) continue;  // below time resolution
      out.breakpoints.push_back(end);
      out.controls.push_back(atoms[i].control);
      out.step.push_back(k);
    }
  }
  return out;
}

}  // namespace laxoc
