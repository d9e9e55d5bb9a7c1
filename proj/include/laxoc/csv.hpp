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

#ifndef LAXOC_CSV_HPP_
#define LAXOC_CSV_HPP_

#include "laxoc/rollout.hpp"
#include "laxoc/types.hpp"

#include <string>
#include <vector>

namespace laxoc {

/// Comma-separated, '.' decimal point, header row, round-trip precision.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Reads a file written by write_csv (numeric body only).
std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>* header = nullptr);

/// {prefix_1, ..., prefix_n}
std::vector<std::string> numbered(const std::string& prefix, int n);

/// time, x_1..x_n; `coords` selects a subset of the state (empty: all).
void write_trajectory_csv(const std::string& path, const std::vector<double>& times,
                          const std::vector<Vec>& states, const std::vector<int>& coords = {});

/// time, a_1..a_m with two rows per piece (start and end), so switch times
/// appear twice with the left and right values.
void write_control_csv(const std::string& path, const PiecewiseControl& ctrl,
                       const std::vector<int>& coords = {});

}  // namespace laxoc

#endif  // LAXOC_CSV_HPP_
