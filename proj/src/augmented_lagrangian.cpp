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

#include "convex_program.hpp"

#include <ceres/ceres.h>

#include <algorithm>
#include <cmath>

namespace laxoc::detail {
namespace {

constexpr double kConeSmoothing = 1e-12;

struct Multipliers {
  Vec atoms;
  Vec cones;
  Vec eq;
  double rho = 10.0;
};

// Constraint values g(z) <= 0 for atoms and cones.
void constraint_values(const ConvexProgram& prog, const Vec& z, Vec& ga, Vec& gc) {
  ga.resize(static_cast<Eigen::Index>(prog.atoms.size()));
  gc.resize(static_cast<Eigen::Index>(prog.cones.size()));
  for (std::size_t i = 0; i < prog.atoms.size(); ++i) {
    ga[i] = prog.atoms[i].atom.residual(prog.atoms[i].map.eval(z));
  }
  for (std::size_t i = 0; i < prog.cones.size(); ++i) {
    const auto& c = prog.cones[i];
    gc[i] = c.map.eval(z).norm() - z[c.tau];
  }
}

class Lagrangian final : public ceres::FirstOrderFunction {
 public:
  Lagrangian(const ConvexProgram& prog, const Multipliers& mult) : prog_(prog), m_(mult) {}

  int NumParameters() const override { return prog_.num_vars; }

  bool Evaluate(const double* params, double* cost, double* gradient) const override {
    const Eigen::Map<const Vec> z(params, prog_.num_vars);
    const double rho = m_.rho;
    double v = prog_.c0 + prog_.c.dot(z);
    Vec g = prog_.c;
    for (const auto& s : prog_.smooth) {
      const Vec y = s.map.eval(z);
      v += s.weight * s.f(y);
      if (gradient) {
        const Vec gz = s.map.F.transpose() * finite_difference_gradient(s.f, y);
        for (std::size_t j = 0; j < s.map.cols.size(); ++j) g[s.map.cols[j]] += s.weight * gz[j];
      }
    }
    for (std::size_t i = 0; i < prog_.atoms.size(); ++i) {
      const auto& a = prog_.atoms[i];
      const Vec y = a.map.eval(z);
      const double h = std::max(0.0, a.atom.residual(y) + m_.atoms[i] / rho);
      if (h == 0.0) continue;
      v += 0.5 * rho * h * h;
      if (gradient) {
        const Vec gz = a.map.F.transpose() * a.atom.subgradient(y);
        for (std::size_t j = 0; j < a.map.cols.size(); ++j) g[a.map.cols[j]] += rho * h * gz[j];
      }
    }
    for (std::size_t i = 0; i < prog_.cones.size(); ++i) {
      const auto& c = prog_.cones[i];
      const Vec u = c.map.eval(z);
      const double nu = std::sqrt(u.squaredNorm() + kConeSmoothing);
      const double h = std::max(0.0, nu - z[c.tau] + m_.cones[i] / rho);
      if (h == 0.0) continue;
      v += 0.5 * rho * h * h;
      if (gradient) {
        const Vec gz = c.map.F.transpose() * (u / nu);
        for (std::size_t j = 0; j < c.map.cols.size(); ++j) g[c.map.cols[j]] += rho * h * gz[j];
        g[c.tau] -= rho * h;
      }
    }
    if (prog_.A.rows() > 0) {
      const Vec r = prog_.A * z - prog_.b;
      v += m_.eq.dot(r) + 0.5 * rho * r.squaredNorm();
      if (gradient) g += prog_.A.transpose() * (m_.eq + rho * r);
    }
    *cost = v;
    if (gradient) Eigen::Map<Vec>(gradient, prog_.num_vars) = g;
    return std::isfinite(v);
  }

 private:
  const ConvexProgram& prog_;
  const Multipliers& m_;
};

}  // namespace

BackendResult augmented_lagrangian_solve(const ConvexProgram& prog, Vec z0,
                                         const SolveOptions& opts) {
  BackendResult out;
  Multipliers mult;
  mult.atoms = Vec::Zero(static_cast<Eigen::Index>(prog.atoms.size()));
  mult.cones = Vec::Zero(static_cast<Eigen::Index>(prog.cones.size()));
  mult.eq = Vec::Zero(prog.A.rows());
  Vec z = std::move(z0);
  for (const auto& c : prog.cones) z[c.tau] = std::max(z[c.tau], c.map.eval(z).norm());

  auto violation = [&prog](const Vec& x) {
    Vec ga, gc;
    constraint_values(prog, x, ga, gc);
    double v = 0.0;
    if (ga.size() > 0) v = std::max(v, ga.maxCoeff());
    if (gc.size() > 0) v = std::max(v, gc.maxCoeff());
    if (prog.A.rows() > 0) v = std::max(v, (prog.A * x - prog.b).cwiseAbs().maxCoeff());
    return v;
  };

  double last_violation = violation(z);
  double last_objective = prog.objective(z);
  ceres::GradientProblemSolver::Options copts;
  copts.line_search_direction_type = ceres::LBFGS;
  copts.logging_type = ceres::SILENT;
  copts.function_tolerance = 1e-14;
  copts.gradient_tolerance = 1e-12;
  copts.parameter_tolerance = 1e-14;
  copts.max_num_iterations = 2000;

  // The iteration budget counts outer (multiplier) updates.
  for (int outer = 0; outer < opts.max_iterations; ++outer) {
    ceres::GradientProblem problem(new Lagrangian(prog, mult));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(copts, problem, z.data(), &summary);
    ++out.iterations;

    Vec ga, gc;
    constraint_values(prog, z, ga, gc);
    for (Eigen::Index i = 0; i < ga.size(); ++i) {
      mult.atoms[i] = std::max(0.0, mult.atoms[i] + mult.rho * ga[i]);
    }
    for (Eigen::Index i = 0; i < gc.size(); ++i) {
      mult.cones[i] = std::max(0.0, mult.cones[i] + mult.rho * gc[i]);
    }
    if (prog.A.rows() > 0) mult.eq += mult.rho * (prog.A * z - prog.b);

    const double viol = violation(z);
    const double obj = prog.objective(z);
    out.history.push_back(obj);
    if (viol <= opts.tol_feasibility && std::abs(obj - last_objective) <= opts.tol_objective) {
      out.status = SolveStatus::kConverged;
      out.message.clear();
      break;
    }
    if (viol > 0.25 * last_violation) mult.rho = std::min(mult.rho * 10.0, 1e10);
    last_violation = viol;
    last_objective = obj;
    out.status = SolveStatus::kMaxIterations;
    out.message = "iteration budget exhausted";
  }
  out.z = std::move(z);
  return out;
}

}  // namespace laxoc::detail
