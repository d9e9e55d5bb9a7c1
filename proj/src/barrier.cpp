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

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>

namespace laxoc::detail {
namespace {

using Triplet = Eigen::Triplet<double>;
using SpMat = Eigen::SparseMatrix<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRegPrimal = 1e-10;

// t * objective + log barrier, optionally in phase-one form where every atom
// carries the shared slack variable and the objective is that slack.
class Centering {
 public:
  Centering(const ConvexProgram& prog, int slack) : prog_(prog), slack_(slack) {
    nv_ = prog.num_vars + (slack >= 0 ? 1 : 0);
  }

  int num_vars() const { return nv_; }

  double slack_value(const Vec& z) const { return z[slack_]; }

  double value(const Vec& z, double t) const {
    double v = 0.0;
    if (slack_ >= 0) {
      v = t * z[slack_];
    } else {
      v = t * prog_.objective(z);
    }
    for (const auto& a : prog_.atoms) {
      double g = a.atom.surrogate_value(a.map.eval(z));
      if (slack_ >= 0) g -= z[slack_];
      if (!(g < 0.0)) return kInf;
      v -= std::log(-g);
    }
    if (slack_ < 0) {
      for (const auto& c : prog_.cones) {
        const double tau = z[c.tau];
        const double s = tau * tau - c.map.eval(z).squaredNorm();
        if (!(tau > 0.0) || !(s > 0.0)) return kInf;
        v -= std::log(s);
      }
    }
    return std::isfinite(v) ? v : kInf;
  }

  // Gradient plus Hessian triplets (fixed emission order).
  void derivatives(const Vec& z, double t, Vec& grad, std::vector<Triplet>& hess) const {
    grad = Vec::Zero(nv_);
    hess.clear();
    if (slack_ >= 0) {
      grad[slack_] += t;
    } else {
      grad.head(prog_.num_vars) += t * prog_.c;
      for (const auto& s : prog_.smooth) {
        const auto e = finite_difference(s.f, s.map.eval(z));
        const Vec gz = s.map.F.transpose() * e.grad;
        const Mat hz = s.map.F.transpose() * e.hess * s.map.F;
        scatter(s.map.cols, t * s.weight * gz, t * s.weight * hz, grad, hess);
      }
    }
    for (const auto& a : prog_.atoms) {
      const auto e = a.atom.surrogate(a.map.eval(z));
      double g = e.value;
      std::vector<int> cols = a.map.cols;
      const auto m = static_cast<Eigen::Index>(cols.size());
      Vec dg(m + (slack_ >= 0 ? 1 : 0));
      Mat d2g = Mat::Zero(dg.size(), dg.size());
      dg.head(m) = a.map.F.transpose() * e.grad;
      d2g.topLeftCorner(m, m) = a.map.F.transpose() * e.hess * a.map.F;
      if (slack_ >= 0) {
        g -= z[slack_];
        dg[m] = -1.0;
        cols.push_back(slack_);
      }
      const double inv = 1.0 / (-g);
      scatter(cols, inv * dg, inv * inv * dg * dg.transpose() + inv * d2g, grad, hess);
    }
    if (slack_ < 0) {
      for (const auto& c : prog_.cones) {
        const Vec u = c.map.eval(z);
        const double tau = z[c.tau];
        const double s = tau * tau - u.squaredNorm();
        const auto m = static_cast<Eigen::Index>(c.map.cols.size());
        std::vector<int> cols = c.map.cols;
        cols.push_back(c.tau);
        // derivatives of -log(tau^2 - |u|^2) in (u, tau), then chain through F
        Vec g(m + 1);
        const Vec gu = 2.0 * u / s;
        g.head(m) = c.map.F.transpose() * gu;
        g[m] = -2.0 * tau / s;
        Mat Huu = (2.0 / s) * Mat::Identity(u.size(), u.size()) + (4.0 / (s * s)) * u * u.transpose();
        Mat H(m + 1, m + 1);
        H.topLeftCorner(m, m) = c.map.F.transpose() * Huu * c.map.F;
        const Vec hut = c.map.F.transpose() * (-4.0 * tau * u / (s * s));
        H.block(0, m, m, 1) = hut;
        H.block(m, 0, 1, m) = hut.transpose();
        H(m, m) = -2.0 / s + 4.0 * tau * tau / (s * s);
        scatter(cols, g, H, grad, hess);
      }
    }
  }

 private:
  static void scatter(const std::vector<int>& cols, const Vec& g, const Mat& H, Vec& grad,
                      std::vector<Triplet>& hess) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      grad[cols[i]] += g[i];
      for (std::size_t j = 0; j < cols.size(); ++j) hess.emplace_back(cols[i], cols[j], H(i, j));
    }
  }

  const ConvexProgram& prog_;
  int slack_;
  int nv_;
};

class NewtonSolver {
 public:
  NewtonSolver(const Centering& f, const ConvexProgram& prog) : f_(f), prog_(prog) {
    const int nv = f.num_vars();
    for (int k = 0; k < prog.A.outerSize(); ++k) {
      for (SpMat::InnerIterator it(prog.A, k); it; ++it) {
        a_.emplace_back(nv + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        a_.emplace_back(static_cast<int>(it.col()), nv + static_cast<int>(it.row()), it.value());
      }
    }
    for (int i = 0; i < nv; ++i) a_.emplace_back(i, i, kRegPrimal);
    // explicit zeros keep the dual diagonal in the sparsity pattern
    for (int i = 0; i < prog.A.rows(); ++i) a_.emplace_back(nv + i, nv + i, 0.0);
  }

  // One damped Newton step. Returns the Newton decrement squared, or a
  // negative value if no acceptable step was found.
  double step(Vec& z, double t) {
    const int nv = f_.num_vars();
    const auto me = prog_.A.rows();
    Vec grad;
    std::vector<Triplet> trip;
    f_.derivatives(z, t, grad, trip);
    trip.insert(trip.end(), a_.begin(), a_.end());
    SpMat K(nv + me, nv + me);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    // symmetric equilibration; barrier curvature spans many orders of magnitude
    Vec d = Vec::Ones(nv + me);
    for (int pass = 0; pass < 4; ++pass) {
      Vec mx = Vec::Zero(nv + me);
      for (int k = 0; k < K.outerSize(); ++k) {
        for (SpMat::InnerIterator it(K, k); it; ++it) {
          mx[it.row()] = std::max(mx[it.row()], std::abs(it.value()));
        }
      }
      for (Eigen::Index i = 0; i < mx.size(); ++i) {
        const double f = mx[i] > 0.0 ? 1.0 / std::sqrt(mx[i]) : 1.0;
        d[i] *= f;
        mx[i] = f;
      }
      for (int k = 0; k < K.outerSize(); ++k) {
        for (SpMat::InnerIterator it(K, k); it; ++it) it.valueRef() *= mx[it.row()] * mx[it.col()];
      }
    }
    if (!analyzed_) {
      lu_.analyzePattern(K);
      analyzed_ = true;
    }
    lu_.factorize(K);
    if (lu_.info() != Eigen::Success) return -1.0;
    Vec rhs(nv + me);
    rhs.head(nv) = -grad;
    rhs.tail(me) = prog_.b - prog_.A * z.head(prog_.num_vars);
    rhs = d.cwiseProduct(rhs);
    Vec sol = lu_.solve(rhs);
    for (int r = 0; r < 3; ++r) {
      const Vec res = rhs - K * sol;
      if (res.cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + rhs.cwiseAbs().maxCoeff())) break;
      sol += lu_.solve(res);
    }
    if (!sol.allFinite()) return -1.0;
    const Vec dz = d.head(nv).cwiseProduct(sol.head(nv));
    const double dec = -grad.dot(dz);
    const double f0 = f_.value(z, t);
    double alpha = 1.0;
    for (int i = 0; i < 60; ++i) {
      const Vec trial = z + alpha * dz;
      const double f1 = f_.value(trial, t);
      if (f1 <= f0 - 0.25 * alpha * std::max(dec, 0.0) || (f1 < kInf && dec <= 1e-14)) {
        z = trial;
        return std::max(dec, 0.0);
      }
      alpha *= 0.5;
    }
    return -1.0;
  }

 private:
  const Centering& f_;
  const ConvexProgram& prog_;
  std::vector<Triplet> a_;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  bool analyzed_ = false;
};

bool strictly_feasible(const ConvexProgram& prog, const Vec& z) {
  for (const auto& a : prog.atoms) {
    if (!(a.atom.surrogate_value(a.map.eval(z)) < 0.0)) return false;
  }
  for (const auto& c : prog.cones) {
    if (!(z[c.tau] > c.map.eval(z).norm())) return false;
  }
  return true;
}

void lift_epigraphs(const ConvexProgram& prog, Vec& z) {
  for (const auto& c : prog.cones) z[c.tau] = -kInf;
  for (const auto& c : prog.cones) z[c.tau] = std::max(z[c.tau], c.map.eval(z).norm() + 1.0);
}

}  // namespace

BackendResult barrier_solve(const ConvexProgram& prog, Vec z0, const SolveOptions& opts) {
  BackendResult out;
  const double mu = 10.0;
  const double inner_tol = 1e-9;
  int budget = opts.max_iterations;
  auto& iters = out.iterations;
  Vec z = std::move(z0);

  if (!strictly_feasible(prog, z)) {
    lift_epigraphs(prog, z);
    const int s = prog.num_vars;
    Centering phase1(prog, s);
    Vec zs(prog.num_vars + 1);
    zs.head(prog.num_vars) = z;
    double worst = 0.0;
    for (const auto& a : prog.atoms) {
      worst = std::max(worst, a.atom.surrogate_value(a.map.eval(z)));
    }
    zs[s] = worst + 1.0;
    NewtonSolver newton(phase1, prog);
    double t = 1.0;
    bool done = false;
    while (!done && iters < budget) {
      for (;;) {
        if (iters >= budget) break;
        const double dec = newton.step(zs, t);
        ++iters;
        if (zs[s] < -1e-3) {
          done = true;
          break;
        }
        if (dec < 0.0 || dec / 2.0 <= inner_tol) break;
      }
      if (done) break;
      if (prog.atoms.size() / t < 1e-10) {
        if (zs[s] < 0.0) break;
        out.status = zs[s] > 1e-8 ? SolveStatus::kInfeasible : SolveStatus::kFailed;
        out.message = "no strictly feasible point (phase one slack " + std::to_string(zs[s]) + ")";
        return out;
      }
      t *= mu;
    }
    if (!(zs[s] < 0.0)) {
      out.status = SolveStatus::kMaxIterations;
      out.message = "phase one did not finish";
      return out;
    }
    z = zs.head(prog.num_vars);
    lift_epigraphs(prog, z);
  }

  Centering phase2(prog, -1);
  NewtonSolver newton(phase2, prog);
  const double theta = std::max(prog.barrier_degree(), 1.0);
  double t = 1.0;
  for (;;) {
    bool stalled = false;
    // decrements below the rounding level of t * objective carry no information
    const double tol = inner_tol + 1e-13 * t * (1.0 + std::abs(prog.objective(z)));
    for (int inner = 0; inner < 100; ++inner) {
      if (iters >= budget) break;
      const double dec = newton.step(z, t);
      ++iters;
      if (dec < 0.0) {
        stalled = true;
        break;
      }
      if (dec / 2.0 <= tol) break;
    }
    out.history.push_back(prog.objective(z));
    if (theta / t <= 1e-2 * opts.tol_objective) {
      out.status = SolveStatus::kConverged;
      break;
    }
    if (iters >= budget) {
      out.status = SolveStatus::kMaxIterations;
      out.message = "iteration budget exhausted";
      break;
    }
    if (stalled && theta / t <= opts.tol_objective) {
      // line search failure this close to the optimum is rounding
      out.status = SolveStatus::kConverged;
      break;
    }
    t *= mu;
  }
  out.z = std::move(z);
  return out;
}

}  // namespace laxoc::detail
