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

#include "laxoc/solver.hpp"

#include "convex_program.hpp"
#include "laxoc/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace laxoc {
namespace detail {

AffineMap combine(const AffineMap& a, const Mat& Sa, const AffineMap& b, const Mat& Sb) {
  std::map<int, Vec> cols;
  auto add = [&cols](const AffineMap& m, const Mat& S) {
    for (std::size_t j = 0; j < m.cols.size(); ++j) {
      Vec v = S * m.F.col(j);
      auto it = cols.find(m.cols[j]);
      if (it == cols.end()) {
        cols.emplace(m.cols[j], std::move(v));
      } else {
        it->second += v;
      }
    }
  };
  add(a, Sa);
  add(b, Sb);
  AffineMap out;
  out.f = Sa * a.f + Sb * b.f;
  for (const auto& [c, v] : cols) {
    if (v.cwiseAbs().maxCoeff() == 0.0) continue;
    out.cols.push_back(c);
  }
  out.F = Mat(out.f.size(), out.cols.size());
  for (std::size_t j = 0; j < out.cols.size(); ++j) out.F.col(j) = cols[out.cols[j]];
  return out;
}

AffineMap restrict_to_rows(const AffineMap& m, const std::vector<int>& rows) {
  AffineMap out;
  out.f = m.f;
  std::vector<Eigen::Index> keep;
  for (std::size_t j = 0; j < m.cols.size(); ++j) {
    bool touches = false;
    for (int r : rows) touches = touches || m.F(r, j) != 0.0;
    if (touches) keep.push_back(static_cast<Eigen::Index>(j));
  }
  out.F = Mat(m.F.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    out.cols.push_back(m.cols[keep[j]]);
    out.F.col(j) = m.F.col(keep[j]);
  }
  return out;
}

double ConvexProgram::objective(const Vec& z) const {
  double v = c0 + c.dot(z);
  for (const auto& s : smooth) v += s.weight * s.f(s.map.eval(z));
  return v;
}

namespace {

AffineMap identity_map(int offset, int n) {
  AffineMap m;
  m.f = Vec::Zero(n);
  m.F = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) m.cols.push_back(offset + i);
  return m;
}

AffineMap beta_map(const Layout& layout, int k) {
  return identity_map(layout.beta_offset(k), layout.n);
}

std::vector<int> atom_rows(const ConvexAtom& atom, int n) {
  std::vector<int> rows;
  std::visit(
      [&rows, n](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, AffineAtom>) {
          for (int i = 0; i < n; ++i) {
            if (a.a[i] != 0.0) rows.push_back(i);
          }
        } else if constexpr (std::is_same_v<T, NormBallAtom>) {
          for (int i = 0; i < n; ++i) {
            if (a.P.col(i).cwiseAbs().maxCoeff() != 0.0) rows.push_back(i);
          }
        } else if constexpr (std::is_same_v<T, ArcAtom>) {
          rows = {a.i, a.j};
        } else {
          for (int i = 0; i < n; ++i) rows.push_back(i);
        }
      },
      atom.kind());
  return rows;
}

class Builder {
 public:
  explicit Builder(const TranscribedProgram& p, double scale) : p_(p), scale_(scale) {
    layout_.reduced = p.reduced;
    layout_.n = p.n;
    layout_.K = p.K();
    layout_.x0 = p.x0;
    for (const auto& st : p.steps) layout_.dt.push_back(st.dt);
    next_var_ = layout_.beta_offset(layout_.K);
    layout_.gamma.resize(p.K());
  }

  Lowered build() {
    const int n = p_.n, K = p_.K();
    if (!p_.reduced) {
      // x[k+1] - x[k] + dt beta[k] = 0, with x[0] = x0 folded into the rhs
      for (int k = 0; k < K; ++k) {
        for (int i = 0; i < n; ++i) {
          const int row = eq_rows_++;
          eq_.emplace_back(row, layout_.x_offset(k + 1) + i, 1.0);
          eq_.emplace_back(row, layout_.beta_offset(k) + i, p_.steps[k].dt);
          if (k == 0) {
            rhs_.push_back(p_.x0[i]);
          } else {
            eq_.emplace_back(row, layout_.x_offset(k) + i, -1.0);
            rhs_.push_back(0.0);
          }
        }
      }
    }
    for (int k = 0; k < K; ++k) add_step(k);
    add_cost(p_.terminal, state_map(layout_, K), scale_);

    Lowered out;
    out.layout = layout_;
    out.constant_violation = constant_violation_;
    auto& prog = out.prog;
    prog.num_vars = next_var_;
    prog.c = Vec::Zero(next_var_);
    for (const auto& [j, v] : linear_) prog.c[j] += v;
    prog.c0 = c0_;
    prog.smooth = std::move(smooth_);
    prog.atoms = std::move(atoms_);
    prog.cones = std::move(cones_);
    prog.A.resize(eq_rows_, next_var_);
    prog.A.setFromTriplets(eq_.begin(), eq_.end());
    prog.b = Eigen::Map<const Vec>(rhs_.data(), static_cast<Eigen::Index>(rhs_.size()));
    return out;
  }

 private:
  void add_linear(const AffineMap& m, const Vec& a, double weight) {
    const Vec row = m.F.transpose() * a;
    for (std::size_t j = 0; j < m.cols.size(); ++j) linear_.emplace_back(m.cols[j], weight * row[j]);
    c0_ += weight * a.dot(m.f);
  }

  void add_equality(const AffineMap& m, const Vec& w, double r) {
    const Vec row = m.F.transpose() * w;
    const int idx = eq_rows_++;
    for (std::size_t j = 0; j < m.cols.size(); ++j) {
      if (row[j] != 0.0) eq_.emplace_back(idx, m.cols[j], row[j]);
    }
    rhs_.push_back(r - w.dot(m.f));
  }

  void add_atom(const AffineMap& m, const ConvexAtom& atom) {
    if (m.constant()) {
      constant_violation_ = std::max(constant_violation_, atom.residual(m.f));
      return;
    }
    atoms_.push_back({restrict_to_rows(m, atom_rows(atom, static_cast<int>(m.rows()))), atom, -1});
  }

  void add_cone(int tau, const AffineMap& u) { cones_.push_back({tau, u}); }

  int new_var() { return next_var_++; }

  void add_cost(const CostExpr& e, const AffineMap& x, double weight) {
    c0_ += weight * e.constant;
    for (const auto& term : e.terms) {
      std::visit(
          [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, AffineTerm>) {
              add_linear(x, t.a, weight);
              c0_ += weight * t.c;
            } else if constexpr (std::is_same_v<T, NormTerm>) {
              const AffineMap u = combine(x, t.P, AffineMap{{}, Mat(t.q.size(), 0), -t.q}, Mat::Identity(t.q.size(), t.q.size()));
              norm_epigraph({u}, weight * t.weight);
            } else if constexpr (std::is_same_v<T, MaxNormTerm>) {
              std::vector<AffineMap> us;
              for (std::size_t i = 0; i < t.P.size(); ++i) {
                us.push_back(combine(x, t.P[i], AffineMap{{}, Mat(t.q[i].size(), 0), -t.q[i]},
                                   Mat::Identity(t.q[i].size(), t.q[i].size())));
              }
              norm_epigraph(us, weight * t.weight);
            } else {
              if (x.constant()) {
                c0_ += weight * t.f(x.f);
              } else {
                smooth_.push_back({x, t.f, weight});
              }
            }
          },
          term);
    }
  }

  // weight * max_i ||u_i||
  void norm_epigraph(const std::vector<AffineMap>& us, double weight) {
    bool constant = true;
    for (const auto& u : us) constant = constant && u.constant();
    if (constant) {
      double m = 0.0;
      for (const auto& u : us) m = std::max(m, u.f.norm());
      c0_ += weight * m;
      return;
    }
    const int tau = new_var();
    layout_.epigraph.push_back(tau);
    linear_.emplace_back(tau, weight);
    for (const auto& u : us) add_cone(tau, u);
  }

  void add_step(int k) {
    const auto& st = p_.steps[k];
    const int n = p_.n;
    const AffineMap xk = state_map(layout_, k);
    const AffineMap y = combine(beta_map(layout_, k), Mat::Identity(n, n), xk, st.M);
    const double w = scale_ * st.dt;

    add_cost(st.stage, xk, w);
    for (const auto& [wv, r] : st.equalities) add_equality(y, wv, r);
    for (const auto& atom : st.atoms) add_atom(y, atom);
    for (const auto& c : st.state_constraints) add_atom(xk, c);

    switch (st.control.kind) {
      case ControlPart::Kind::kZero:
        break;
      case ControlPart::Kind::kAffine:
        add_linear(y, st.control.coeff, w);
        c0_ += w * st.control.constant;
        break;
      case ControlPart::Kind::kGenerators: {
        // y = sum_j gamma_j y_j, sum gamma = 1, gamma >= 0
        const auto& blk = st.control.generators;
        const int J = static_cast<int>(blk.points.size());
        std::vector<int> g(J);
        for (int j = 0; j < J; ++j) {
          g[j] = new_var();
          linear_.emplace_back(g[j], w * blk.costs[j]);
          AffineMap single;
          single.cols = {g[j]};
          single.F = Mat::Ones(1, 1);
          single.f = Vec::Zero(1);
          atoms_.push_back({single, ConvexAtom::affine(-Vec::Ones(1), 0.0), -1});
        }
        for (int i = 0; i < n; ++i) {
          const int row = eq_rows_++;
          for (std::size_t c = 0; c < y.cols.size(); ++c) {
            if (y.F(i, c) != 0.0) eq_.emplace_back(row, y.cols[c], y.F(i, c));
          }
          for (int j = 0; j < J; ++j) {
            if (blk.points[j][i] != 0.0) eq_.emplace_back(row, g[j], -blk.points[j][i]);
          }
          rhs_.push_back(-y.f[i]);
        }
        const int row = eq_rows_++;
        for (int j = 0; j < J; ++j) eq_.emplace_back(row, g[j], 1.0);
        rhs_.push_back(1.0);
        layout_.gamma[k] = g;
        break;
      }
    }
  }

  const TranscribedProgram& p_;
  double scale_;
  Layout layout_;
  int next_var_ = 0;
  int eq_rows_ = 0;
  std::vector<Eigen::Triplet<double>> eq_;
  std::vector<double> rhs_;
  std::vector<std::pair<int, double>> linear_;
  double c0_ = 0.0;
  std::vector<SmoothObjective> smooth_;
  std::vector<AtomTerm> atoms_;
  std::vector<ConeTerm> cones_;
  double constant_violation_ = 0.0;
};

}  // namespace

AffineMap state_map(const Layout& layout, int k) {
  const int n = layout.n;
  if (k == 0) return AffineMap{{}, Mat(n, 0), layout.x0};
  if (!layout.reduced) return identity_map(layout.x_offset(k), n);
  AffineMap m;
  m.f = layout.x0;
  m.F = Mat::Zero(n, static_cast<Eigen::Index>(k) * n);
  for (int j = 0; j < k; ++j) {
    m.F.block(0, static_cast<Eigen::Index>(j) * n, n, n) =
        -layout.dt[j] * Mat::Identity(n, n);
    for (int i = 0; i < n; ++i) m.cols.push_back(layout.beta_offset(j) + i);
  }
  return m;
}

Lowered lower(const TranscribedProgram& program, double objective_scale) {
  if (!(objective_scale > 0.0)) throw InvalidArgument("objective scale must be positive");
  return Builder(program, objective_scale).build();
}

Vec initial_point(const Lowered& low, const TranscribedProgram& program, std::mt19937_64* rng) {
  const auto& L = low.layout;
  const int n = L.n;
  Vec z = Vec::Zero(low.prog.num_vars);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vec x = L.x0;
  for (int k = 0; k < L.K; ++k) {
    const auto& st = program.steps[k];
    Vec y = Vec::Zero(n);
    if (st.control.kind == ControlPart::Kind::kGenerators) {
      const auto& blk = st.control.generators;
      const auto J = blk.points.size();
      std::vector<double> w(J, 1.0);
      if (rng) {
        for (auto& v : w) v = 0.05 + u01(*rng);
      }
      double total = 0.0;
      for (double v : w) total += v;
      for (std::size_t j = 0; j < J; ++j) {
        z[L.gamma[k][j]] = w[j] / total;
        y += (w[j] / total) * blk.points[j];
      }
    } else {
      const auto set = generator_control_set(program.spec, st.t, x, 2000);
      const Vec shift = st.M * x;
      for (const auto& blk : set.generators) {
        Vec centroid = Vec::Zero(static_cast<Eigen::Index>(blk.coords.size()));
        for (const auto& pnt : blk.points) centroid += pnt;
        centroid /= static_cast<double>(blk.points.size());
        if (rng) {
          std::uniform_int_distribution<std::size_t> pick(0, blk.points.size() - 1);
          const double w = 0.9 * u01(*rng);
          centroid = (1.0 - w) * centroid + w * blk.points[pick(*rng)];
        }
        for (std::size_t i = 0; i < blk.coords.size(); ++i) {
          y[blk.coords[i]] = centroid[i] + shift[blk.coords[i]];
        }
      }
    }
    const Vec beta = y - st.M * x;
    z.segment(L.beta_offset(k), n) = beta;
    x = x - beta * st.dt;
    if (!L.reduced) z.segment(L.x_offset(k + 1), n) = x;
  }
  for (const auto& cone : low.prog.cones) {
    z[cone.tau] = std::max(z[cone.tau], cone.map.eval(z).norm() + 1.0);
  }
  return z;
}

std::vector<Vec> extract_beta(const Lowered& low, const Vec& z) {
  std::vector<Vec> beta;
  for (int k = 0; k < low.layout.K; ++k) {
    beta.push_back(z.segment(low.layout.beta_offset(k), low.layout.n));
  }
  return beta;
}

}  // namespace detail

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kMaxIterations:
      return "max_iterations";
    case SolveStatus::kInfeasible:
      return "infeasible";
    default:
      return "failed";
  }
}

SolveResult solve(const TranscribedProgram& program, const SolveOptions& opts) {
  if (!(opts.tol_feasibility > 0.0) || !(opts.tol_objective > 0.0)) {
    throw InvalidArgument("solve: tolerances must be positive");
  }
  SolveResult result;
  const auto low = detail::lower(program, opts.objective_scale);
  if (low.constant_violation > opts.tol_feasibility) {
    result.status = SolveStatus::kInfeasible;
    result.message = "a constraint at the initial state is violated";
    return result;
  }
  std::mt19937_64 rng(opts.random_seed);
  Vec z0 = detail::initial_point(low, program, opts.randomize_start ? &rng : nullptr);
  auto backend = opts.algorithm == SolverAlgorithm::kBarrier
                     ? detail::barrier_solve(low.prog, std::move(z0), opts)
                     : detail::augmented_lagrangian_solve(low.prog, std::move(z0), opts);
  result.iterations = backend.iterations;
  result.status = backend.status;
  result.message = backend.message;
  for (double h : backend.history) result.objective_history.push_back(h / opts.objective_scale);
  if (backend.status == SolveStatus::kInfeasible || backend.z.size() == 0) return result;

  result.beta_star = detail::extract_beta(low, backend.z);
  result.x_star = program.states_from_controls(result.beta_star);
  result.residuals = program.residuals(result.x_star, result.beta_star);
  const auto obj = program.objective(result.x_star, result.beta_star);
  result.objective = obj.as_double();
  if (result.status == SolveStatus::kConverged &&
      result.residuals.max() > opts.tol_feasibility) {
    result.status = SolveStatus::kFailed;
    result.message = "returned point violates the feasibility tolerance";
  }
  return result;
}

KktDiagnostics kkt_residuals(const TranscribedProgram& program, const SolveResult& result) {
  KktDiagnostics d;
  if (result.beta_star.empty()) throw InvalidArgument("kkt_residuals: result has no point");
  const auto& beta = result.beta_star;
  const auto x = program.states_from_controls(beta);
  d.primal = program.residuals(result.x_star.empty() ? x : result.x_star, beta);

  // Work on the reduced epigraph form so that every point is dynamics-feasible.
  auto reduced = eliminate_states(program);
  const auto low = detail::lower(reduced, 1.0);
  const auto& prog = low.prog;
  Vec z = Vec::Zero(prog.num_vars);
  for (int k = 0; k < low.layout.K; ++k) z.segment(low.layout.beta_offset(k), low.layout.n) = beta[k];
  for (const auto& cone : prog.cones) z[cone.tau] = std::max(z[cone.tau], cone.map.eval(z).norm());
  for (int k = 0; k < low.layout.K; ++k) {
    if (low.layout.gamma[k].empty()) continue;
    // recover hull weights from the LP at y
    const auto& st = reduced.steps[k];
    const Vec y = beta[k] + st.M * x[k];
    const auto& blk = st.control.generators;
    ConvexControlSet set;
    set.dim = reduced.n;
    set.shift = Vec::Zero(reduced.n);
    set.generators = {blk};
    const auto lp = solve_hull_lp(set, y);
    if (lp.feasible) {
      for (const auto& [j, w] : lp.weights.front()) z[low.layout.gamma[k][j]] = w;
    }
  }

  Vec grad = prog.c;
  for (const auto& s : prog.smooth) {
    const Vec gy = finite_difference_gradient(s.f, s.map.eval(z));
    const Vec gz = s.map.F.transpose() * gy;
    for (std::size_t j = 0; j < s.map.cols.size(); ++j) grad[s.map.cols[j]] += s.weight * gz[j];
  }
  // Near-active inequality gradients (cones as ||u|| - tau <= 0).
  std::vector<Vec> G;
  const double active = 1e-4;
  for (const auto& a : prog.atoms) {
    const Vec y = a.map.eval(z);
    if (a.atom.residual(y) < -active) continue;
    const Vec gy = a.atom.subgradient(y);
    Vec g = Vec::Zero(prog.num_vars);
    const Vec gz = a.map.F.transpose() * gy;
    for (std::size_t j = 0; j < a.map.cols.size(); ++j) g[a.map.cols[j]] += gz[j];
    G.push_back(std::move(g));
  }
  for (const auto& cone : prog.cones) {
    const Vec u = cone.map.eval(z);
    const double nu = u.norm();
    if (nu - z[cone.tau] < -active || nu == 0.0) continue;
    Vec g = Vec::Zero(prog.num_vars);
    const Vec gz = cone.map.F.transpose() * (u / nu);
    for (std::size_t j = 0; j < cone.map.cols.size(); ++j) g[cone.map.cols[j]] += gz[j];
    g[cone.tau] -= 1.0;
    G.push_back(std::move(g));
  }
  const Mat Aeq = Mat(prog.A);
  const auto m = static_cast<Eigen::Index>(G.size());
  const Eigen::Index me = Aeq.rows();
  Mat B(prog.num_vars, m + me);
  for (Eigen::Index i = 0; i < m; ++i) B.col(i) = G[i];
  if (me > 0) B.rightCols(me) = Aeq.transpose();
  if (B.cols() == 0) {
    d.stationarity = grad.norm();
    return d;
  }
  // min ||grad + B w|| with w[0..m) >= 0, by projected gradient with momentum
  const double Lip = std::max(B.squaredNorm() > 0.0 ? (B.transpose() * B).eigenvalues().real().maxCoeff() : 1.0, 1e-12);
  Vec w = Vec::Zero(B.cols()), v = w;
  double tk = 1.0;
  for (int it = 0; it < 5000; ++it) {
    const Vec r = grad + B * v;
    Vec next = v - (B.transpose() * r) / Lip;
    for (Eigen::Index i = 0; i < m; ++i) next[i] = std::max(next[i], 0.0);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    v = next + ((tk - 1.0) / tn) * (next - w);
    w = next;
    tk = tn;
  }
  d.stationarity = (grad + B * w).norm();
  return d;
}

}  // namespace laxoc
