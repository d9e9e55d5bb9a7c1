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

#include "laxoc/lp.hpp"

#include <cmath>

namespace laxoc {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kRatioSlack = 1e-12;

class Tableau {
 public:
  Tableau(const Mat& A, const Vec& b) : m_(A.rows()), n_(A.cols()) {
    t_ = Mat::Zero(m_ + 1, n_ + m_ + 1);
    basis_.resize(m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign * A.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = sign * b[i];
      basis_[i] = n_ + i;
    }
  }

  Eigen::Index rhs() const { return n_ + m_; }
  Eigen::Index rows() const { return m_; }
  Eigen::Index structural() const { return n_; }
  bool artificial(Eigen::Index j) const { return j >= n_; }
  double objective() const { return -t_(m_, rhs()); }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  double value(Eigen::Index i) const { return t_(i, rhs()); }
  double entry(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }

  void set_costs(const Vec& cost) {
    // cost has n_ + m_ entries; price out the basis
    t_.row(m_).setZero();
    t_.row(m_).head(n_ + m_) = cost.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index j) {
    t_.row(r) /= t_(r, j);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, j);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = j;
  }

  /// Runs simplex iterations over columns [0, ncols). Returns status.
  LpResult::Status run(Eigen::Index ncols, const LpOptions& opts, int& iterations) {
    int degenerate = 0;
    while (iterations < opts.max_iterations) {
      const bool bland = degenerate > 50;
      Eigen::Index enter = -1;
      double best = -opts.optimality_tol;
      for (Eigen::Index j = 0; j < ncols; ++j) {
        const double d = t_(m_, j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return LpResult::Status::kOptimal;
      // Two-pass ratio test: find the minimum ratio, then among rows within
      // a small slack of it take the largest pivot (smallest basis index on
      // exact ties) to limit growth on nearly parallel columns.
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotTol) continue;
        ratio = std::min(ratio, (std::max(t_(i, rhs()), 0.0) + kRatioSlack) / a);
      }
      if (!std::isfinite(ratio)) return LpResult::Status::kUnbounded;
      Eigen::Index leave = -1;
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotTol || std::max(t_(i, rhs()), 0.0) / a > ratio) continue;
        if (leave < 0 || a > t_(leave, enter) ||
            (a == t_(leave, enter) && basis_[i] < basis_[leave])) {
          leave = i;
        }
      }
      ratio = std::max(t_(leave, rhs()), 0.0) / t_(leave, enter);
      degenerate = ratio <= 1e-14 ? degenerate + 1 : 0;
      pivot(leave, enter);
      ++iterations;
    }
    return LpResult::Status::kIterationLimit;
  }

 private:
  Eigen::Index m_, n_;
  Mat t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpResult solve_lp(const Mat& A, const Vec& b, const Vec& c, const LpOptions& opts) {
  if (A.rows() != b.size() || A.cols() != c.size()) {
    throw InvalidArgument("solve_lp: dimension mismatch");
  }
  if (A.rows() == 0) throw InvalidArgument("solve_lp: no constraints");
  const Eigen::Index m = A.rows(), n = A.cols();
  LpResult out;
  Tableau tab(A, b);

  Vec phase1 = Vec::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.set_costs(phase1);
  auto status = tab.run(n + m, opts, out.iterations);
  if (status == LpResult::Status::kIterationLimit) {
    out.status = status;
    return out;
  }
  out.infeasibility = tab.objective();
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  if (out.infeasibility > opts.feasibility_tol * scale) {
    out.status = LpResult::Status::kInfeasible;
    return out;
  }

  // Drive zero-level artificials out of the basis where a structural pivot exists.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!tab.artificial(tab.basis()[i])) continue;
    Eigen::Index best = -1;
    double mag = 1e-7;  // smaller entries in a zero-level row are rounding
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.entry(i, j)) > mag) {
        mag = std::abs(tab.entry(i, j));
        best = j;
      }
    }
    if (best >= 0) tab.pivot(i, best);
  }

  Vec phase2 = Vec::Zero(n + m);
  phase2.head(n) = c;
  tab.set_costs(phase2);
  status = tab.run(n, opts, out.iterations);
  out.status = status;
  if (status != LpResult::Status::kOptimal) return out;

  out.x = Vec::Zero(n);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto j = tab.basis()[i];
    if (tab.artificial(j)) continue;
    out.x[j] = std::max(tab.value(i), 0.0);
    cols.push_back(j);
  }
  // One round of refinement on the basic columns against the original data.
  if (!cols.empty()) {
    Mat AB(m, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) AB.col(k) = A.col(cols[k]);
    const Vec r = b - A * out.x;
    const Vec delta = AB.colPivHouseholderQr().solve(r);
    Vec refined = out.x;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      refined[cols[k]] = std::max(out.x[cols[k]] + delta[k], 0.0);
    }
    // near-dependent basic columns can make the correction worse
    if ((b - A * refined).norm() < r.norm()) out.x = std::move(refined);
  }
  for (auto j : cols) out.basis.push_back(static_cast<int>(j));
  out.objective = c.dot(out.x);
  return out;
}

}  // namespace laxoc
