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

#ifndef LAXOC_CONTROL_SET_HPP_
#define LAXOC_CONTROL_SET_HPP_

#include "laxoc/types.hpp"

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

namespace laxoc {

class ControlSetDescriptor;

struct BoxSet {
  Vec lower;
  Vec upper;
};

struct FiniteSet {
  std::vector<Vec> points;
};

struct ProductSet {
  std::vector<ControlSetDescriptor> factors;
};

struct CustomSampler {
  std::vector<Vec> samples;
  std::function<bool(const Vec&)> contains;
};

/// The admissible control set A.
///
/// A box, a finite list of points, a Cartesian product of descriptors, or an
/// arbitrary set given by a finite sample and a membership predicate.
class ControlSetDescriptor {
 public:
  using Variant = std::variant<BoxSet, FiniteSet, ProductSet, CustomSampler>;

  static ControlSetDescriptor box(Vec lower, Vec upper);
  static ControlSetDescriptor finite(std::vector<Vec> points);
  static ControlSetDescriptor product(std::vector<ControlSetDescriptor> factors);
  static ControlSetDescriptor custom(std::vector<Vec> samples,
                                     std::function<bool(const Vec&)> contains);

  const Variant& kind() const { return kind_; }
  int dim() const;

  /// Distance-like violation: 0 inside, positive outside.
  double membership_residual(const Vec& a) const;
  bool contains(const Vec& a, double tol = 1e-9) const {
    return membership_residual(a) <= tol;
  }

  /// True when the set is convex by construction (boxes and products of
  /// boxes, single points). Custom sets report false; callers test them by
  /// sampling.
  bool convex_by_construction() const;

  /// Uniform sample: every point of finite factors and a grid over box
  /// factors, with at most `max_points` points overall. Box axes use an odd
  /// number of nodes so the axis midpoint is included.
  std::vector<Vec> sample(std::size_t max_points = 10000) const;

  /// Grid sample with an explicit node count per box axis.
  std::vector<Vec> sample_per_axis(int nodes_per_axis) const;

  /// Uniformly random point (boxes uniform, finite sets uniform over points,
  /// custom sets uniform over their sample).
  template <class Rng>
  Vec random_point(Rng& rng) const;

  /// Number of box axes in this descriptor.
  int box_axes() const;
  /// Product of the sizes of all finite factors (1 if none).
  std::size_t finite_cardinality() const;

 private:
  explicit ControlSetDescriptor(Variant kind) : kind_(std::move(kind)) {}
  std::vector<Vec> sample_impl(int nodes_per_axis) const;
  Variant kind_;
};

}  // namespace laxoc

#include <random>

namespace laxoc {

template <class Rng>
Vec ControlSetDescriptor::random_point(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (const auto* box = std::get_if<BoxSet>(&kind_)) {
    Vec a(box->lower.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a[i] = box->lower[i] + unit(rng) * (box->upper[i] - box->lower[i]);
    }
    return a;
  }
  if (const auto* fin = std::get_if<FiniteSet>(&kind_)) {
    std::uniform_int_distribution<std::size_t> pick(0, fin->points.size() - 1);
    return fin->points[pick(rng)];
  }
  if (const auto* custom = std::get_if<CustomSampler>(&kind_)) {
    std::uniform_int_distribution<std::size_t> pick(0, custom->samples.size() - 1);
    return custom->samples[pick(rng)];
  }
  const auto& prod = std::get<ProductSet>(kind_);
  Vec a(dim());
  Eigen::Index offset = 0;
  for (const auto& factor : prod.factors) {
    Vec part = factor.random_point(rng);
    a.segment(offset, part.size()) = part;
    offset += part.size();
  }
  return a;
}

}  // namespace laxoc

#endif  // LAXOC_CONTROL_SET_HPP_
