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

#ifndef LAXOC_CONVEX_ATOMS_HPP_
#define LAXOC_CONVEX_ATOMS_HPP_

#include "laxoc/types.hpp"

#include <functional>
#include <variant>
#include <vector>

namespace laxoc {

/// Value, gradient and Hessian of a twice-differentiable function.
struct SmoothEval {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

/// Central-difference derivatives for black-box evaluators.
SmoothEval finite_difference(const std::function<double(const Vec&)>& f, const Vec& y);
Vec finite_difference_gradient(const std::function<double(const Vec&)>& f, const Vec& y);

// Atom kinds. Each describes a convex set {y : residual(y) <= 0}.

/// a.y + c <= 0
struct AffineAtom {
  Vec a;
  double c = 0.0;
};

/// ||P y - q||_2 <= radius
struct NormBallAtom {
  Mat P;
  Vec q;
  double radius = 1.0;
};

/// Circular arc of radius `radius` over the angular span [theta_lo, theta_hi]
/// in the (y_i, y_j) plane, extended by the tangent half-planes at its end
/// points: max over theta in the span of (y_i cos theta + y_j sin theta) <= radius.
/// Inside the span this coincides with +-y_i <= sqrt(radius^2 - y_j^2).
struct ArcAtom {
  int dim = 2;
  int i = 0;
  int j = 1;
  double radius = 1.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
};

/// Black-box convex function f(y) <= 0; derivatives by finite differences.
struct SmoothAtom {
  int dim = 0;
  std::function<double(const Vec&)> f;
};

/// One convex inequality h(y) <= 0.
///
/// `residual` is in natural units (distance-like for balls and arcs) and is
/// what membership checks compare against tolerances. `surrogate` is a
/// twice-differentiable convex function with the same zero sublevel set,
/// which is what barrier methods consume.
class ConvexAtom {
 public:
  using Variant = std::variant<AffineAtom, NormBallAtom, ArcAtom, SmoothAtom>;

  ConvexAtom(Variant kind) : kind_(std::move(kind)) {}  // NOLINT implicit

  static ConvexAtom affine(Vec a, double c) { return ConvexAtom(AffineAtom{std::move(a), c}); }
  static ConvexAtom norm_ball(Mat P, Vec q, double radius) {
    return ConvexAtom(NormBallAtom{std::move(P), std::move(q), radius});
  }
  static ConvexAtom arc(int dim, int i, int j, double radius, double theta_lo,
                        double theta_hi) {
    return ConvexAtom(ArcAtom{dim, i, j, radius, theta_lo, theta_hi});
  }
  static ConvexAtom smooth(int dim, std::function<double(const Vec&)> f) {
    return ConvexAtom(SmoothAtom{dim, std::move(f)});
  }

  const Variant& kind() const { return kind_; }
  int input_dim() const;
  bool is_affine() const { return std::holds_alternative<AffineAtom>(kind_); }

  double residual(const Vec& y) const;
  Vec subgradient(const Vec& y) const;
  SmoothEval surrogate(const Vec& y) const;
  double surrogate_value(const Vec& y) const;

  /// Euclidean projection onto the atom's set. Exact for affine, arc and
  /// balls whose P has orthonormal rows; a linearized step otherwise.
  Vec project(const Vec& y) const;

 private:
  Variant kind_;
};

/// ||P x - q||_2 scaled by weight.
struct NormTerm {
  Mat P;
  Vec q;
  double weight = 1.0;
};

/// weight * max_i ||P_i x - q_i||_2
struct MaxNormTerm {
  std::vector<Mat> P;
  std::vector<Vec> q;
  double weight = 1.0;
};

struct AffineTerm {
  Vec a;
  double c = 0.0;
};

struct SmoothTerm {
  int dim = 0;
  std::function<double(const Vec&)> f;
};

using CostTerm = std::variant<AffineTerm, NormTerm, MaxNormTerm, SmoothTerm>;

/// A convex function of the state written as a sum of recognizable terms.
///
/// Solvers lower norm and max-of-norm terms to second-order-cone epigraphs;
/// smooth terms are differentiated numerically.
struct CostExpr {
  std::vector<CostTerm> terms;
  double constant = 0.0;

  double value(const Vec& x) const;
  Vec subgradient(const Vec& x) const;
  bool empty() const { return terms.empty(); }
};

}  // namespace laxoc

#endif  // LAXOC_CONVEX_ATOMS_HPP_
