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

#include "laxoc/transform.hpp"

#include "builtin_geometry.hpp"
#include "laxoc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace laxoc {
namespace {

constexpr std::size_t kControlSample = 10000;
constexpr int kArcPoints = 4001;

Vec unit(int n, int i) {
  Vec e = Vec::Zero(n);
  e[i] = 1.0;
  return e;
}

Vec shift_for(const ProblemSpec& spec, double s, const Vec& x) {
  if (spec.structured) return spec.structured->M(s) * x;
  return Vec::Zero(spec.state_dim);
}

// Atoms and equalities only; generator blocks are added by the callers that
// need them.
ConvexControlSet closed_form_set(const ProblemSpec& spec, double s, const Vec& x) {
  const int n = spec.state_dim;
  ConvexControlSet set;
  set.dim = n;
  set.shift = shift_for(spec, s, x);
  set.closed_form = true;
  switch (spec.builtin) {
    case BuiltinId::kVehicle2d:
      set.inequalities.push_back(ConvexAtom::norm_ball(Mat::Identity(n, n), Vec::Zero(n), 1.0));
      break;
    case BuiltinId::kGear4d: {
      const auto geo = detail::gear_geometry(spec);
      set.equalities.emplace_back(unit(n, 0), 0.0);
      set.equalities.emplace_back(unit(n, 2), 0.0);
      const Eigen::Vector2d centroid = (geo.P1 + geo.P2) / 3.0;
      for (double g : {1.0, 2.0}) {
        // edge from the origin along (-1, g); outward normal +-(g, 1)
        Eigen::Vector2d normal(g, 1.0);
        if (normal.dot(centroid) > 0.0) normal = -normal;
        Vec a = Vec::Zero(n);
        a[1] = normal.x();
        a[3] = normal.y();
        set.inequalities.push_back(ConvexAtom::affine(a, 0.0));
      }
      Vec a = Vec::Zero(n);
      a[1] = geo.u;
      a[3] = geo.v;
      set.inequalities.push_back(ConvexAtom::affine(a, -1.0));  // full torque edge
      break;
    }
    case BuiltinId::kFormation12d: {
      const double slope = 1.0 / (2.0 * std::sqrt(3.0));
      for (int l = 0; l < detail::kFormationAgents; ++l) {
        const int o = 4 * l;
        set.equalities.emplace_back(unit(n, o), 0.0);
        set.equalities.emplace_back(unit(n, o + 2), 0.0);
        set.inequalities.push_back(ConvexAtom::arc(n, o + 1, o + 3, detail::kFormationMaxAccel,
                                                   detail::kForwardLo, detail::kForwardHi));
        set.inequalities.push_back(ConvexAtom::arc(n, o + 1, o + 3,
                                                   -detail::kFormationMinAccel,
                                                   detail::kReverseLo, detail::kReverseHi));
        for (double sign : {1.0, -1.0}) {
          Vec a = Vec::Zero(n);
          a[o + 1] = slope;
          a[o + 3] = sign;
          set.inequalities.push_back(ConvexAtom::affine(a, -0.75));
        }
      }
      set.cost_offset = spec.structured->Lx(s, x);
      break;
    }
    case BuiltinId::kNone:
      throw InvalidArgument("closed-form control set requested for a custom problem");
  }
  return set;
}

// Per-agent arcs plus the origin: every extreme point of each agent's hull.
std::vector<GeneratorBlock> formation_generators(const ProblemSpec& spec, const Vec& x) {
  std::vector<GeneratorBlock> blocks;
  const double h = detail::kFormationHalfAngle;
  for (int l = 0; l < detail::kFormationAgents; ++l) {
    const int o = 4 * l;
    GeneratorBlock blk;
    blk.coords = {o, o + 1, o + 2, o + 3};
    blk.control_coords = {2 * l, 2 * l + 1};
    auto add = [&](double a1, double a2) {
      Vec b(4);
      b << -x[o + 1], -a1 * std::cos(a2), -x[o + 3], -a1 * std::sin(a2);
      Vec a(2);
      a << a1, a2;
      blk.points.push_back(b);
      blk.costs.push_back(0.0);
      blk.controls.push_back(a);
    };
    add(0.0, 0.0);
    for (double a1 : {detail::kFormationMaxAccel, detail::kFormationMinAccel}) {
      for (int j = 0; j < kArcPoints; ++j) {
        add(a1, -h + 2.0 * h * j / (kArcPoints - 1));
      }
    }
    blocks.push_back(std::move(blk));
  }
  (void)spec;
  return blocks;
}

GeneratorBlock sampled_block(const ProblemSpec& spec, double s, const Vec& x,
                             std::size_t max_points) {
  GeneratorBlock blk;
  for (int i = 0; i < spec.state_dim; ++i) blk.coords.push_back(i);
  for (int i = 0; i < spec.control_dim; ++i) blk.control_coords.push_back(i);
  for (const auto& a : spec.control_set.sample(max_points)) {
    blk.points.push_back(-spec.dynamics(s, x, a));
    blk.costs.push_back(spec.stage_cost(s, x, a));
    blk.controls.push_back(a);
  }
  return blk;
}

Vec restrict(const Vec& v, const std::vector<int>& coords) {
  Vec out(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) out[i] = v[coords[i]];
  return out;
}

// max and min of q(theta) = p2 cos(theta) + p4 sin(theta) over [lo, hi]
std::pair<double, double> sinusoid_range(double p2, double p4, double lo, double hi,
                                         double* argmax, double* argmin) {
  auto q = [&](double th) { return p2 * std::cos(th) + p4 * std::sin(th); };
  double best = q(lo), worst = q(lo);
  *argmax = lo;
  *argmin = lo;
  auto consider = [&](double th) {
    const double v = q(th);
    if (v > best) {
      best = v;
      *argmax = th;
    }
    if (v < worst) {
      worst = v;
      *argmin = th;
    }
  };
  consider(hi);
  const double r = std::hypot(p2, p4);
  if (r > 0.0) {
    const double psi = std::atan2(p4, p2);
    for (double cand : {psi, psi + std::numbers::pi}) {
      for (int k = -2; k <= 2; ++k) {
        const double th = cand + 2.0 * std::numbers::pi * k;
        if (th >= lo && th <= hi) consider(th);
      }
    }
  }
  return {best, worst};
}

}  // namespace

double ConvexControlSet::atom_residual(const Vec& b) const {
  if (!closed_form) throw InvalidArgument("atom_residual: set has no closed form");
  const Vec y = b + shift;
  double r = 0.0;
  for (const auto& [w, rhs] : equalities) r = std::max(r, std::abs(w.dot(y) - rhs));
  for (const auto& atom : inequalities) r = std::max(r, atom.residual(y));
  return r;
}

double ConvexControlSet::membership_residual(const Vec& b) const {
  if (b.size() != dim) throw InvalidArgument("membership_residual: wrong dimension");
  if (closed_form) return atom_residual(b);
  const auto lp = solve_hull_lp(*this, b);
  return lp.infeasibility;
}

HullLpSolution solve_hull_lp(const ConvexControlSet& set, const Vec& b) {
  if (set.generators.empty()) throw InvalidArgument("hull LP: set has no generator sample");
  HullLpSolution out;
  out.feasible = true;
  out.cost = set.cost_offset;
  for (const auto& blk : set.generators) {
    const auto rows = static_cast<Eigen::Index>(blk.coords.size()) + 1;
    const auto cols = static_cast<Eigen::Index>(blk.points.size());
    Mat A(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      A.col(j).head(rows - 1) = blk.points[j];
      A(rows - 1, j) = 1.0;
    }
    Vec rhs(rows);
    rhs.head(rows - 1) = restrict(b, blk.coords);
    rhs[rows - 1] = 1.0;
    const Vec cost = Eigen::Map<const Vec>(blk.costs.data(), cols);
    const auto lp = solve_lp(A, rhs, cost);
    out.infeasibility = std::max(out.infeasibility, lp.infeasibility);
    if (lp.status == LpResult::Status::kInfeasible) {
      out.feasible = false;
      out.weights.clear();
      return out;
    }
    if (lp.status != LpResult::Status::kOptimal) {
      throw NumericalError("hull LP: simplex did not reach an optimum");
    }
    std::vector<std::pair<int, double>> w;
    for (int j : lp.basis) {
      if (lp.x[j] > 0.0) w.emplace_back(j, lp.x[j]);
    }
    out.cost += lp.objective;
    out.weights.push_back(std::move(w));
  }
  return out;
}

double conjugate_over_generators(const ConvexControlSet& set, const Vec& p) {
  double total = -set.cost_offset;
  for (const auto& blk : set.generators) {
    const Vec pb = restrict(p, blk.coords);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < blk.points.size(); ++j) {
      best = std::max(best, pb.dot(blk.points[j]) - blk.costs[j]);
    }
    total += best;
  }
  return total;
}

HamiltonianValue hamiltonian(const ProblemSpec& spec, double s, const Vec& x, const Vec& p) {
  if (p.size() != spec.state_dim || !p.allFinite()) {
    throw InvalidArgument("hamiltonian: costate must be finite with state dimension");
  }
  HamiltonianValue h;
  switch (spec.builtin) {
    case BuiltinId::kVehicle2d:
      h.value = p.norm();
      h.argmax = Vec::Constant(1, p.norm() > 0.0 ? std::atan2(-p[1], -p[0]) : 0.0);
      return h;
    case BuiltinId::kGear4d: {
      const double c1 = spec.params.at("c1"), c2 = spec.params.at("c2");
      double best = 0.0;
      h.argmax = Vec(2);
      h.argmax << 1.0, 0.0;
      for (double g : {1.0, 2.0}) {
        const double gain = (-p[1] + g * p[3]) / (c1 + c2 * g * g) - 1.0;
        if (gain > best) {
          best = gain;
          h.argmax << g, 1.0;
        }
      }
      h.value = -p[0] * x[1] - p[2] * x[3] + best;
      return h;
    }
    case BuiltinId::kFormation12d: {
      h.value = -spec.structured->Lx(s, x);
      h.argmax = Vec::Zero(spec.control_dim);
      for (int l = 0; l < detail::kFormationAgents; ++l) {
        const int o = 4 * l;
        double amax = 0.0, amin = 0.0;
        const auto [qmax, qmin] =
            sinusoid_range(p[o + 1], p[o + 3], -detail::kFormationHalfAngle,
                           detail::kFormationHalfAngle, &amax, &amin);
        // -a1 q(a2) is linear in a1: best at a1 = 3 (q < 0) or a1 = -1 (q > 0)
        const double forward = -detail::kFormationMaxAccel * qmin;
        const double reverse = -detail::kFormationMinAccel * qmax;
        double gain = 0.0;
        if (forward >= reverse && forward > 0.0) {
          gain = forward;
          h.argmax[2 * l] = detail::kFormationMaxAccel;
          h.argmax[2 * l + 1] = amin;
        } else if (reverse > 0.0) {
          gain = reverse;
          h.argmax[2 * l] = detail::kFormationMinAccel;
          h.argmax[2 * l + 1] = amax;
        }
        h.value += -p[o] * x[o + 1] - p[o + 2] * x[o + 3] + gain;
      }
      return h;
    }
    case BuiltinId::kNone:
      break;
  }
  const auto sample = spec.control_set.sample(kControlSample);
  if (sample.empty()) throw InvalidArgument("hamiltonian: empty control sample");
  h.value = -std::numeric_limits<double>::infinity();
  for (const auto& a : sample) {
    const double v = -p.dot(spec.dynamics(s, x, a)) - spec.stage_cost(s, x, a);
    if (v > h.value) {
      h.value = v;
      h.argmax = a;
    }
  }
  return h;
}

ExtendedReal lb_cost(const ProblemSpec& spec, double s, const Vec& x, const Vec& b,
                     double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("lb_cost: tolerance must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : spec.control_set.sample(kControlSample)) {
    if ((spec.dynamics(s, x, a) + b).norm() <= tol) {
      best = std::min(best, spec.stage_cost(s, x, a));
    }
  }
  if (std::isinf(best)) return ExtendedReal::infinity();
  return ExtendedReal(best);
}

ExtendedReal hstar(const ProblemSpec& spec, double s, const Vec& x, const Vec& b,
                   HstarMethod method) {
  if (b.size() != spec.state_dim) throw InvalidArgument("hstar: wrong velocity dimension");
  if (method == HstarMethod::kAuto) {
    method = spec.builtin == BuiltinId::kNone ? HstarMethod::kGeneratorLp
                                              : HstarMethod::kClosedForm;
  }
  if (method == HstarMethod::kClosedForm) {
    const auto set = closed_form_set(spec, s, x);
    if (set.atom_residual(b) > kHullTol) return ExtendedReal::infinity();
    if (spec.builtin == BuiltinId::kGear4d) {
      const auto geo = detail::gear_geometry(spec);
      const Vec y = b + set.shift;
      return ExtendedReal(geo.u * y[1] + geo.v * y[3]);
    }
    return ExtendedReal(set.cost_offset);
  }
  const auto set = generator_control_set(spec, s, x);
  const auto lp = solve_hull_lp(set, b);
  if (!lp.feasible) return ExtendedReal::infinity();
  return ExtendedReal(lp.cost);
}

ConvexControlSet generator_control_set(const ProblemSpec& spec, double s, const Vec& x,
                                       std::size_t max_points) {
  ConvexControlSet set;
  set.dim = spec.state_dim;
  set.shift = shift_for(spec, s, x);
  if (spec.builtin == BuiltinId::kFormation12d) {
    set.generators = formation_generators(spec, x);
    set.cost_offset = spec.structured->Lx(s, x);
  } else {
    set.generators.push_back(sampled_block(spec, s, x, max_points));
  }
  return set;
}

ConvexControlSet closed_form_control_set(const ProblemSpec& spec, double s, const Vec& x) {
  return closed_form_set(spec, s, x);
}

ConvexControlSet conv_control_set(const ProblemSpec& spec, double s, const Vec& x) {
  if (x.size() != spec.state_dim) throw InvalidArgument("conv_control_set: wrong state size");
  if (spec.builtin == BuiltinId::kNone) return generator_control_set(spec, s, x);
  auto set = closed_form_set(spec, s, x);
  set.generators = generator_control_set(spec, s, x).generators;
  return set;
}

ControlPart control_part(const ProblemSpec& spec, double s, std::size_t max_generators) {
  if (!spec.structured) throw InvalidArgument("control_part: problem has no structured form");
  ControlPart part;
  switch (spec.builtin) {
    case BuiltinId::kVehicle2d:
    case BuiltinId::kFormation12d:
      part.kind = ControlPart::Kind::kZero;
      return part;
    case BuiltinId::kGear4d: {
      const auto geo = detail::gear_geometry(spec);
      part.kind = ControlPart::Kind::kAffine;
      part.coeff = Vec::Zero(spec.state_dim);
      part.coeff[1] = geo.u;
      part.coeff[3] = geo.v;
      return part;
    }
    case BuiltinId::kNone:
      break;
  }
  part.kind = ControlPart::Kind::kGenerators;
  auto& blk = part.generators;
  for (int i = 0; i < spec.state_dim; ++i) blk.coords.push_back(i);
  for (int i = 0; i < spec.control_dim; ++i) blk.control_coords.push_back(i);
  const auto& sf = *spec.structured;
  for (const auto& a : spec.control_set.sample(max_generators)) {
    blk.points.push_back(-sf.phi(s, a));
    blk.costs.push_back(sf.La(s, a));
    blk.controls.push_back(a);
  }
  return part;
}

Vec project(const ConvexControlSet& set, const Vec& b, double tol) {
  if (!set.closed_form) throw InvalidArgument("project: set has no closed-form atoms");
  if (set.equalities.empty() && set.inequalities.empty()) return b;
  // Dykstra's algorithm in y = b + shift; equalities are hyperplanes.
  const std::size_t ne = set.equalities.size();
  const std::size_t count = ne + set.inequalities.size();
  std::vector<Vec> increments(count, Vec::Zero(b.size()));
  Vec y = b + set.shift;
  auto project_one = [&](std::size_t k, const Vec& z) -> Vec {
    if (k < ne) {
      const auto& [w, r] = set.equalities[k];
      return z - ((w.dot(z) - r) / w.squaredNorm()) * w;
    }
    return set.inequalities[k - ne].project(z);
  };
  for (int sweep = 0; sweep < 500; ++sweep) {
    const Vec start = y;
    for (std::size_t k = 0; k < count; ++k) {
      const Vec z = y + increments[k];
      y = project_one(k, z);
      increments[k] = z - y;
    }
    if ((y - start).norm() <= tol && set.atom_residual(y - set.shift) <= tol) {
      return y - set.shift;
    }
  }
  if (set.atom_residual(y - set.shift) <= tol) return y - set.shift;
  throw NumericalError("project: alternating projections did not converge");
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    default:
      return "inconclusive";
  }
}

const ConvexityReport::Entry* ConvexityReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

ConvexityReport check_convexity_conditions(const ProblemSpec& spec, std::uint64_t seed) {
  ConvexityReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0), sym(-1.0, 1.0);
  const int n = spec.state_dim;
  const double radius = reachable_radius(spec);
  auto state = [&] {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = spec.initial_state[i] + radius * sym(rng);
    return x;
  };
  auto when = [&] { return spec.t0 + (spec.T - spec.t0) * u01(rng); };
  constexpr int kPairs = 200;
  auto near = [](double lhs, double rhs) { return lhs <= rhs + 1e-9 * (1.0 + std::abs(rhs)); };

  auto add = [&](const std::string& name, CheckStatus st, std::string detail) {
    report.entries.push_back({name, st, std::move(detail)});
    return st;
  };
  auto midpoint_test = [&](const std::string& name, auto&& fn, auto&& draw) {
    for (int i = 0; i < kPairs; ++i) {
      const double s = when();
      const Vec u = draw(), v = draw();
      if (!near(fn(s, 0.5 * (u + v)), 0.5 * (fn(s, u) + fn(s, v)))) {
        return add(name, CheckStatus::kFail, "midpoint inequality violated on a sampled pair");
      }
    }
    return add(name, CheckStatus::kPass, "midpoint convex on sampled pairs");
  };

  const auto g_ok = midpoint_test(
      "terminal cost convex", [&](double, const Vec& x) { return spec.terminal_cost(x); },
      state);
  CheckStatus c_ok = CheckStatus::kPass;
  if (spec.has_state_constraint()) {
    c_ok = midpoint_test(
        "state constraint convex",
        [&](double s, const Vec& x) { return spec.constraint(s, x); }, state);
  } else {
    add("state constraint convex", CheckStatus::kPass, "no state constraint");
  }

  const bool a_convex = spec.control_set.convex_by_construction();
  const auto a_ok = add("control set convex", a_convex ? CheckStatus::kPass : CheckStatus::kFail,
                        a_convex ? "box or product of boxes" : "finite or custom factor");

  // f affine in (x, a): f at the midpoint equals the mean
  CheckStatus f_affine = CheckStatus::kPass;
  for (int i = 0; i < kPairs && f_affine == CheckStatus::kPass; ++i) {
    const double s = when();
    const Vec x1 = state(), x2 = state();
    const Vec a1 = spec.control_set.random_point(rng), a2 = spec.control_set.random_point(rng);
    const Vec mid = spec.dynamics(s, 0.5 * (x1 + x2), 0.5 * (a1 + a2));
    const Vec avg = 0.5 * (spec.dynamics(s, x1, a1) + spec.dynamics(s, x2, a2));
    if ((mid - avg).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + avg.cwiseAbs().maxCoeff())) {
      f_affine = CheckStatus::kFail;
    }
  }
  add("dynamics affine in (x,a)", f_affine,
      f_affine == CheckStatus::kPass ? "affine on sampled pairs" : "not affine in (x,a)");

  CheckStatus structured_ok = CheckStatus::kInconclusive;
  CheckStatus lx_ok = CheckStatus::kInconclusive;
  CheckStatus la_ok = CheckStatus::kInconclusive;
  if (spec.structured) {
    const auto diag = check_problem(spec, seed);
    structured_ok = diag.structured_residual <= 1e-9 ? CheckStatus::kPass : CheckStatus::kFail;
    add("dynamics structured M(s)x + phi(s,a)", structured_ok,
        "max residual " + std::to_string(diag.structured_residual));
    lx_ok = midpoint_test(
        "state stage cost convex",
        [&](double s, const Vec& x) { return spec.structured->Lx(s, x); }, state);
    // La over pairs whose midpoint stays in A
    la_ok = CheckStatus::kPass;
    for (int i = 0; i < kPairs; ++i) {
      const double s = when();
      const Vec a1 = spec.control_set.random_point(rng), a2 = spec.control_set.random_point(rng);
      const Vec am = 0.5 * (a1 + a2);
      if (!spec.control_set.contains(am)) continue;
      const auto& La = spec.structured->La;
      if (!near(La(s, am), 0.5 * (La(s, a1) + La(s, a2)))) {
        la_ok = CheckStatus::kFail;
        break;
      }
    }
    add("control stage cost convex", la_ok, "midpoint test over pairs with midpoint in A");
  } else {
    add("dynamics structured M(s)x + phi(s,a)", CheckStatus::kInconclusive,
        "no structured form supplied");
    add("state stage cost convex", CheckStatus::kInconclusive, "no structured form supplied");
    add("control stage cost convex", CheckStatus::kInconclusive, "no structured form supplied");
  }

  // Joint spot check of {(x,b) : b in Conv(B(s,x))}
  {
    CheckStatus joint = CheckStatus::kPass;
    for (int i = 0; i < 20 && joint == CheckStatus::kPass; ++i) {
      const double s = when();
      const Vec x1 = state(), x2 = state();
      const Vec a1 = spec.control_set.random_point(rng), a2 = spec.control_set.random_point(rng);
      const Vec b1 = -spec.dynamics(s, x1, a1), b2 = -spec.dynamics(s, x2, a2);
      const Vec xm = 0.5 * (x1 + x2);
      const auto set = spec.builtin == BuiltinId::kNone
                           ? generator_control_set(spec, s, xm, 2000)
                           : closed_form_set(spec, s, xm);
      if (set.membership_residual(0.5 * (b1 + b2)) > kHullTol) joint = CheckStatus::kFail;
    }
    report.joint_set = add("velocity set jointly convex", joint,
                           "sampled midpoints of (x,b) pairs tested for hull membership");
  }

  auto all_pass = [](std::initializer_list<CheckStatus> list) {
    CheckStatus out = CheckStatus::kPass;
    for (auto st : list) {
      if (st == CheckStatus::kFail) return CheckStatus::kFail;
      if (st == CheckStatus::kInconclusive) out = CheckStatus::kInconclusive;
    }
    return out;
  };
  report.condition1 = all_pass({lx_ok, la_ok, g_ok, a_ok, f_affine, c_ok});
  report.condition2 = all_pass({lx_ok, g_ok, structured_ok, c_ok});
  return report;
}

}  // namespace laxoc
