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

#ifndef LAXOC_TYPES_HPP_
#define LAXOC_TYPES_HPP_

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace laxoc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thrown when a caller violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical routine cannot produce a result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A real value or a certified +infinity.
///
/// Infinity is a tag, never a large float: domain logic (is b in the
/// convexified velocity set?) must be exact.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double value) : value_(value) {}

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_finite() const { return !infinite_; }
  constexpr bool is_infinite() const { return infinite_; }

  /// Value of a finite number. Throws on +infinity.
  double value() const {
    if (infinite_) throw NumericalError("ExtendedReal: value() of +infinity");
    return value_;
  }

  /// Finite value or std::numeric_limits<double>::infinity().
  constexpr double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

inline ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
  if (a.is_infinite() || b.is_infinite()) return ExtendedReal::infinity();
  return ExtendedReal(a.value() + b.value());
}

}  // namespace laxoc

#endif  // LAXOC_TYPES_HPP_
