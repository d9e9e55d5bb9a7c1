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

#include "laxoc/convex_atoms.hpp"

#include <cmath>
#include <numbers>

namespace laxoc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Offset of angle phi past lo, in [0, 2pi).
double angle_past(double phi, double lo) {
  double d = std::fmod(phi - lo, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  return d;
}

struct ArcSupport {
  double value;
  double theta;  // maximizing direction
  bool radial;   // maximizer interior to the span
};

ArcSupport arc_support(const ArcAtom& arc, double u, double v) {
  const double norm = std::hypot(u, v);
  const double span = arc.theta_hi - arc.theta_lo;
  if (norm > 0.0) {
    const double phi = std::atan2(v, u);
    if (angle_past(phi, arc.theta_lo) <= span) return {norm, phi, true};
  }
  const double at_lo = u * std::cos(arc.theta_lo) + v * std::sin(arc.theta_lo);
  const double at_hi = u * std::cos(arc.theta_hi) + v * std::sin(arc.theta_hi);
  if (at_lo >= at_hi) return {at_lo, arc.theta_lo, false};
  return {at_hi, arc.theta_hi, false};
}

double step_for(double y) { return 1e-4 * (1.0 + std::abs(y)); }

}  // namespace

Vec finite_difference_gradient(const std::function<double(const Vec&)>& f, const Vec& y) {
  Vec g(y.size());
  Vec p = y;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double h = step_for(y[i]);
    p[i] = y[i] + h;
    const double fp = f(p);
    p[i] = y[i] - h;
    const double fm = f(p);
    p[i] = y[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

SmoothEval finite_difference(const std::function<double(const Vec&)>& f, const Vec& y) {
  const auto n = y.size();
  SmoothEval out;
  out.value = f(y);
  out.grad = finite_difference_gradient(f, y);
  out.hess = Mat::Zero(n, n);
  Vec p = y;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double hi = step_for(y[i]);
    p[i] = y[i] + hi;
    const double fp = f(p);
    p[i] = y[i] - hi;
    const double fm = f(p);
    p[i] = y[i];
    out.hess(i, i) = (fp - 2.0 * out.value + fm) / (hi * hi);
    for (Eigen::Index j = 0; j < i; ++j) {
      const double hj = step_for(y[j]);
      auto at = [&](double si, double sj) {
        p[i] = y[i] + si * hi;
        p[j] = y[j] + sj * hj;
        const double v = f(p);
        p[i] = y[i];
        p[j] = y[j];
        return v;
      };
      const double h2 = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hi * hj);
      out.hess(i, j) = h2;
      out.hess(j, i) = h2;
    }
  }
  return out;
}

int ConvexAtom::input_dim() const {
  return std::visit(
      [](const auto& k) -> int {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AffineAtom>) {
          return static_cast<int>(k.a.size());
        } else if constexpr (std::is_same_v<T, NormBallAtom>) {
          return static_cast<int>(k.P.cols());
        } else {
          return k.dim;
        }
      },
      kind_);
}

double ConvexAtom::residual(const Vec& y) const {
  return std::visit(
      [&y](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AffineAtom>) {
          return k.a.dot(y) + k.c;
        } else if constexpr (std::is_same_v<T, NormBallAtom>) {
          return (k.P * y - k.q).norm() - k.radius;
        } else if constexpr (std::is_same_v<T, ArcAtom>) {
          return arc_support(k, y[k.i], y[k.j]).value - k.radius;
        } else {
          return k.f(y);
        }
      },
      kind_);
}

Vec ConvexAtom::subgradient(const Vec& y) const {
  return std::visit(
      [&y](const auto& k) -> Vec {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AffineAtom>) {
          return k.a;
        } else if constexpr (std::is_same_v<T, NormBallAtom>) {
          const Vec z = k.P * y - k.q;
          const double nz = z.norm();
          if (nz == 0.0) return Vec::Zero(y.size());
          return k.P.transpose() * (z / nz);
        } else if constexpr (std::is_same_v<T, ArcAtom>) {
          const auto s = arc_support(k, y[k.i], y[k.j]);
          Vec g = Vec::Zero(y.size());
          g[k.i] = std::cos(s.theta);
          g[k.j] = std::sin(s.theta);
          return g;
        } else {
          return finite_difference_gradient(k.f, y);
        }
      },
      kind_);
}

SmoothEval ConvexAtom::surrogate(const Vec& y) const {
  const auto n = y.size();
  return std::visit(
      [&y, n](const auto& k) -> SmoothEval {
        using T = std::decay_t<decltype(k)>;
        SmoothEval e;
        if constexpr (std::is_same_v<T, AffineAtom>) {
          e.value = k.a.dot(y) + k.c;
          e.grad = k.a;
          e.hess = Mat::Zero(n, n);
        } else if constexpr (std::is_same_v<T, NormBallAtom>) {
          // ||Py - q||^2 - rho^2: smooth, same zero sublevel set
          const Vec z = k.P * y - k.q;
          e.value = z.squaredNorm() - k.radius * k.radius;
          e.grad = 2.0 * k.P.transpose() * z;
          e.hess = 2.0 * k.P.transpose() * k.P;
        } else if constexpr (std::is_same_v<T, ArcAtom>) {
          // max(sigma, 0)^2 - rho^2, C1 with piecewise-constant Hessian
          const auto s = arc_support(k, y[k.i], y[k.j]);
          e.value = -k.radius * k.radius;
          e.grad = Vec::Zero(n);
          e.hess = Mat::Zero(n, n);
          if (s.value > 0.0) {
            e.value += s.value * s.value;
            const double c = std::cos(s.theta), sn = std::sin(s.theta);
            e.grad[k.i] = 2.0 * s.value * c;
            e.grad[k.j] = 2.0 * s.value * sn;
            if (s.radial) {
              e.hess(k.i, k.i) = 2.0;
              e.hess(k.j, k.j) = 2.0;
            } else {
              e.hess(k.i, k.i) = 2.0 * c * c;
              e.hess(k.i, k.j) = 2.0 * c * sn;
              e.hess(k.j, k.i) = 2.0 * c * sn;
              e.hess(k.j, k.j) = 2.0 * sn * sn;
            }
          }
        } else {
          e = finite_difference(k.f, y);
        }
        return e;
      },
      kind_);
}

double ConvexAtom::surrogate_value(const Vec& y) const {
  if (const auto* ball = std::get_if<NormBallAtom>(&kind_)) {
    return (ball->P * y - ball->q).squaredNorm() - ball->radius * ball->radius;
  }
  if (const auto* arc = std::get_if<ArcAtom>(&kind_)) {
    const double s = std::max(arc_support(*arc, y[arc->i], y[arc->j]).value, 0.0);
    return s * s - arc->radius * arc->radius;
  }
  return residual(y);
}

Vec ConvexAtom::project(const Vec& y) const {
  if (residual(y) <= 0.0) return y;
  return std::visit(
      [&y, this](const auto& k) -> Vec {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AffineAtom>) {
          const double viol = k.a.dot(y) + k.c;
          return y - (viol / k.a.squaredNorm()) * k.a;
        } else if constexpr (std::is_same_v<T, NormBallAtom>) {
          const Vec z = k.P * y - k.q;
          const Mat gram = k.P * k.P.transpose();
          if ((gram - Mat::Identity(gram.rows(), gram.cols())).norm() < 1e-12) {
            return y - k.P.transpose() * (z - (k.radius / z.norm()) * z);
          }
          const Vec g = subgradient(y);
          return y - (residual(y) / g.squaredNorm()) * g;
        } else if constexpr (std::is_same_v<T, ArcAtom>) {
          // Nearest boundary point among the arc and its two tangent rays.
          const Eigen::Vector2d u(y[k.i], y[k.j]);
          const Eigen::Vector2d e_lo(std::cos(k.theta_lo), std::sin(k.theta_lo));
          const Eigen::Vector2d e_hi(std::cos(k.theta_hi), std::sin(k.theta_hi));
          std::vector<Eigen::Vector2d> cand;
          const double phi = std::atan2(u.y(), u.x());
          if (u.norm() > 0.0 && angle_past(phi, k.theta_lo) <= k.theta_hi - k.theta_lo) {
            cand.push_back(k.radius * u.normalized());
          }
          const Eigen::Vector2d t_lo(e_lo.y(), -e_lo.x());  // leaves the arc clockwise
          const Eigen::Vector2d t_hi(-e_hi.y(), e_hi.x());  // counter-clockwise
          const Eigen::Vector2d p_lo = k.radius * e_lo, p_hi = k.radius * e_hi;
          cand.push_back(p_lo + std::max(0.0, (u - p_lo).dot(t_lo)) * t_lo);
          cand.push_back(p_hi + std::max(0.0, (u - p_hi).dot(t_hi)) * t_hi);
          Eigen::Vector2d best = cand.front();
          for (const auto& c : cand) {
            if ((c - u).squaredNorm() < (best - u).squaredNorm()) best = c;
          }
          Vec out = y;
          out[k.i] = best.x();
          out[k.j] = best.y();
          return out;
        } else {
          Vec z = y;
          for (int it = 0; it < 50; ++it) {
            const double r = k.f(z);
            if (r <= 0.0) break;
            const Vec g = finite_difference_gradient(k.f, z);
            const double gg = g.squaredNorm();
            if (gg == 0.0) break;
            z -= (r / gg) * g;
          }
          return z;
        }
      },
      kind_);
}

double CostExpr::value(const Vec& x) const {
  double total = constant;
  for (const auto& term : terms) {
    total += std::visit(
        [&x](const auto& t) -> double {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, AffineTerm>) {
            return t.a.dot(x) + t.c;
          } else if constexpr (std::is_same_v<T, NormTerm>) {
            return t.weight * (t.P * x - t.q).norm();
          } else if constexpr (std::is_same_v<T, MaxNormTerm>) {
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < t.P.size(); ++i) {
              m = std::max(m, (t.P[i] * x - t.q[i]).norm());
            }
            return t.weight * m;
          } else {
            return t.f(x);
          }
        },
        term);
  }
  return total;
}

Vec CostExpr::subgradient(const Vec& x) const {
  Vec g = Vec::Zero(x.size());
  auto norm_grad = [&x](const Mat& P, const Vec& q) -> Vec {
    const Vec z = P * x - q;
    const double nz = z.norm();
    if (nz == 0.0) return Vec::Zero(x.size());
    return P.transpose() * (z / nz);
  };
  for (const auto& term : terms) {
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, AffineTerm>) {
            g += t.a;
          } else if constexpr (std::is_same_v<T, NormTerm>) {
            g += t.weight * norm_grad(t.P, t.q);
          } else if constexpr (std::is_same_v<T, MaxNormTerm>) {
            std::size_t arg = 0;
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < t.P.size(); ++i) {
              const double v = (t.P[i] * x - t.q[i]).norm();
              if (v > m) {
                m = v;
                arg = i;
              }
            }
            if (!t.P.empty()) g += t.weight * norm_grad(t.P[arg], t.q[arg]);
          } else {
            g += finite_difference_gradient(t.f, x);
          }
        },
        term);
  }
  return g;
}

}  // namespace laxoc
