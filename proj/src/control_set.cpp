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

#include "laxoc/control_set.hpp"

#include <algorithm>
#include <cmath>

namespace laxoc {

ControlSetDescriptor ControlSetDescriptor::box(Vec lower, Vec upper) {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw InvalidArgument("box control set: bounds must be non-empty and of equal size");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) {
      throw InvalidArgument("box control set: lower bound exceeds upper bound");
    }
  }
  return ControlSetDescriptor(BoxSet{std::move(lower), std::move(upper)});
}

ControlSetDescriptor ControlSetDescriptor::finite(std::vector<Vec> points) {
  if (points.empty()) throw InvalidArgument("finite control set: no points");
  const auto d = points.front().size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d || d == 0) {
      throw InvalidArgument("finite control set: inconsistent point dimension");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) {
        throw InvalidArgument("finite control set: duplicate point");
      }
    }
  }
  return ControlSetDescriptor(FiniteSet{std::move(points)});
}

ControlSetDescriptor ControlSetDescriptor::product(
    std::vector<ControlSetDescriptor> factors) {
  if (factors.empty()) throw InvalidArgument("product control set: no factors");
  return ControlSetDescriptor(ProductSet{std::move(factors)});
}

ControlSetDescriptor ControlSetDescriptor::custom(
    std::vector<Vec> samples, std::function<bool(const Vec&)> contains) {
  if (samples.empty()) throw InvalidArgument("custom control set: empty sample");
  if (!contains) throw InvalidArgument("custom control set: missing predicate");
  for (const auto& s : samples) {
    if (s.size() != samples.front().size()) {
      throw InvalidArgument("custom control set: inconsistent sample dimension");
    }
    if (!contains(s)) {
      throw InvalidArgument("custom control set: sample fails its own predicate");
    }
  }
  return ControlSetDescriptor(CustomSampler{std::move(samples), std::move(contains)});
}

int ControlSetDescriptor::dim() const {
  return std::visit(
      [](const auto& k) -> int {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, BoxSet>) {
          return static_cast<int>(k.lower.size());
        } else if constexpr (std::is_same_v<T, FiniteSet>) {
          return static_cast<int>(k.points.front().size());
        } else if constexpr (std::is_same_v<T, ProductSet>) {
          int d = 0;
          for (const auto& f : k.factors) d += f.dim();
          return d;
        } else {
          return static_cast<int>(k.samples.front().size());
        }
      },
      kind_);
}

double ControlSetDescriptor::membership_residual(const Vec& a) const {
  if (a.size() != dim()) throw InvalidArgument("control has wrong dimension");
  return std::visit(
      [&a](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, BoxSet>) {
          double r = 0.0;
          for (Eigen::Index i = 0; i < a.size(); ++i) {
            r = std::max({r, k.lower[i] - a[i], a[i] - k.upper[i]});
          }
          return r;
        } else if constexpr (std::is_same_v<T, FiniteSet>) {
          double best = std::numeric_limits<double>::infinity();
          for (const auto& p : k.points) {
            best = std::min(best, (p - a).cwiseAbs().maxCoeff());
          }
          return best;
        } else if constexpr (std::is_same_v<T, ProductSet>) {
          double r = 0.0;
          Eigen::Index offset = 0;
          for (const auto& f : k.factors) {
            const int d = f.dim();
            r = std::max(r, f.membership_residual(a.segment(offset, d)));
            offset += d;
          }
          return r;
        } else {
          return k.contains(a) ? 0.0 : 1.0;
        }
      },
      kind_);
}

bool ControlSetDescriptor::convex_by_construction() const {
  return std::visit(
      [](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, BoxSet>) {
          return true;
        } else if constexpr (std::is_same_v<T, FiniteSet>) {
          return k.points.size() == 1;
        } else if constexpr (std::is_same_v<T, ProductSet>) {
          return std::all_of(k.factors.begin(), k.factors.end(),
                             [](const auto& f) { return f.convex_by_construction(); });
        } else {
          return false;
        }
      },
      kind_);
}

int ControlSetDescriptor::box_axes() const {
  return std::visit(
      [](const auto& k) -> int {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, BoxSet>) {
          return static_cast<int>(k.lower.size());
        } else if constexpr (std::is_same_v<T, ProductSet>) {
          int n = 0;
          for (const auto& f : k.factors) n += f.box_axes();
          return n;
        } else {
          return 0;
        }
      },
      kind_);
}

std::size_t ControlSetDescriptor::finite_cardinality() const {
  return std::visit(
      [](const auto& k) -> std::size_t {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, FiniteSet>) {
          return k.points.size();
        } else if constexpr (std::is_same_v<T, CustomSampler>) {
          return k.samples.size();
        } else if constexpr (std::is_same_v<T, ProductSet>) {
          std::size_t n = 1;
          for (const auto& f : k.factors) n *= f.finite_cardinality();
          return n;
        } else {
          return 1;
        }
      },
      kind_);
}

std::vector<Vec> ControlSetDescriptor::sample(std::size_t max_points) const {
  const int axes = box_axes();
  if (axes == 0) return sample_impl(1);
  const double budget =
      static_cast<double>(max_points) / static_cast<double>(finite_cardinality());
  int nodes = static_cast<int>(std::floor(std::pow(std::max(budget, 1.0), 1.0 / axes) + 1e-9));
  if (nodes % 2 == 0) nodes -= 1;
  nodes = std::max(nodes, 2);
  return sample_impl(nodes);
}

std::vector<Vec> ControlSetDescriptor::sample_per_axis(int nodes_per_axis) const {
  if (nodes_per_axis < 1) throw InvalidArgument("sample_per_axis: need at least one node");
  return sample_impl(nodes_per_axis);
}

std::vector<Vec> ControlSetDescriptor::sample_impl(int nodes) const {
  return std::visit(
      [nodes](const auto& k) -> std::vector<Vec> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, BoxSet>) {
          const auto d = k.lower.size();
          std::vector<std::vector<double>> axis(d);
          for (Eigen::Index i = 0; i < d; ++i) {
            if (k.lower[i] == k.upper[i] || nodes == 1) {
              axis[i].push_back(nodes == 1 ? 0.5 * (k.lower[i] + k.upper[i]) : k.lower[i]);
              continue;
            }
            for (int j = 0; j < nodes; ++j) {
              const double u = static_cast<double>(j) / (nodes - 1);
              axis[i].push_back(k.lower[i] + u * (k.upper[i] - k.lower[i]));
            }
          }
          std::vector<Vec> out;
          std::vector<std::size_t> idx(d, 0);
          while (true) {
            Vec a(d);
            for (Eigen::Index i = 0; i < d; ++i) a[i] = axis[i][idx[i]];
            out.push_back(a);
            Eigen::Index i = d - 1;
            while (i >= 0 && ++idx[i] == axis[i].size()) {
              idx[i] = 0;
              --i;
            }
            if (i < 0) break;
          }
          return out;
        } else if constexpr (std::is_same_v<T, FiniteSet>) {
          return k.points;
        } else if constexpr (std::is_same_v<T, CustomSampler>) {
          return k.samples;
        } else {
          std::vector<Vec> out{Vec(0)};
          for (const auto& f : k.factors) {
            const auto part = f.sample_impl(nodes);
            std::vector<Vec> next;
            next.reserve(out.size() * part.size());
            for (const auto& head : out) {
              for (const auto& tail : part) {
                Vec a(head.size() + tail.size());
                a << head, tail;
                next.push_back(std::move(a));
              }
            }
            out = std::move(next);
          }
          return out;
        }
      },
      kind_);
}

}  // namespace laxoc
