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

#include "laxoc/csv.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace laxoc {
namespace {

std::vector<int> all_or(const std::vector<int>& coords, int n) {
  if (!coords.empty()) return coords;
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  out.imbue(std::locale::classic());
  out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw InvalidArgument("write_csv: row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  if (!out) throw InvalidArgument("write_csv: failed writing '" + path + "'");
}

std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::string line;
  std::vector<std::vector<double>> rows;
  if (!std::getline(in, line)) return rows;
  if (header) {
    header->clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header->push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    ss.imbue(std::locale::classic());
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(prefix + "_" + std::to_string(i));
  return out;
}

void write_trajectory_csv(const std::string& path, const std::vector<double>& times,
                          const std::vector<Vec>& states, const std::vector<int>& coords) {
  if (times.size() != states.size()) throw InvalidArgument("write_trajectory_csv: size mismatch");
  const auto cols = all_or(coords, states.empty() ? 0 : static_cast<int>(states.front().size()));
  std::vector<std::string> header{"time"};
  for (const auto& h : numbered("x", static_cast<int>(cols.size()))) header.push_back(h);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i]};
    for (int c : cols) row.push_back(states[i][c]);
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void write_control_csv(const std::string& path, const PiecewiseControl& ctrl,
                       const std::vector<int>& coords) {
  const auto cols = all_or(coords, ctrl.values.empty() ? 0 : static_cast<int>(ctrl.values.front().size()));
  std::vector<std::string> header{"time"};
  for (const auto& h : numbered("a", static_cast<int>(cols.size()))) header.push_back(h);
  std::vector<std::vector<double>> rows;
  for (int p = 0; p < ctrl.pieces(); ++p) {
    for (double t : {ctrl.breakpoints[p], ctrl.breakpoints[p + 1]}) {
      std::vector<double> row{t};
      for (int c : cols) row.push_back(ctrl.values[p][c]);
      rows.push_back(std::move(row));
    }
  }
  write_csv(path, header, rows);
}

}  // namespace laxoc
