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

#include "laxoc/cli/config.hpp"

#include "laxoc/problem.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace laxoc::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + key + "' in " + where);
  }
}

SolverAlgorithm parse_algorithm(const std::string& name) {
  if (name == "barrier") return SolverAlgorithm::kBarrier;
  if (name == "augmented_lagrangian") return SolverAlgorithm::kAugmentedLagrangian;
  throw ConfigError("unknown solver algorithm '" + name + "'");
}

void parse_solver(const json& s, SolveOptions& o) {
  reject_unknown(s, {"algorithm", "max_iterations", "tol_feasibility", "tol_objective",
                     "random_seed", "randomize_start"},
                 "solver");
  if (s.contains("algorithm")) o.algorithm = parse_algorithm(get<std::string>(s, "algorithm", "solver"));
  if (s.contains("max_iterations")) o.max_iterations = get<int>(s, "max_iterations", "solver");
  if (s.contains("tol_feasibility")) o.tol_feasibility = get<double>(s, "tol_feasibility", "solver");
  if (s.contains("tol_objective")) o.tol_objective = get<double>(s, "tol_objective", "solver");
  if (s.contains("random_seed")) o.random_seed = get<std::uint64_t>(s, "random_seed", "solver");
  if (s.contains("randomize_start")) o.randomize_start = get<bool>(s, "randomize_start", "solver");
  if (o.max_iterations < 1) throw ConfigError("solver.max_iterations must be positive");
  if (!(o.tol_feasibility > 0.0) || !(o.tol_objective > 0.0)) {
    throw ConfigError("solver tolerances must be positive");
  }
}

void parse_oracle(const json& s, OracleConfig& o) {
  reject_unknown(s, {"mode", "resolution", "box", "tolerance", "K", "controls_per_axis"}, "oracle");
  if (s.contains("mode")) o.mode = get<std::string>(s, "mode", "oracle");
  if (o.mode != "hjb" && o.mode != "brute") throw ConfigError("oracle.mode must be 'hjb' or 'brute'");
  if (s.contains("resolution")) o.resolution = get<std::vector<int>>(s, "resolution", "oracle");
  if (s.contains("box")) {
    const auto box = get<std::vector<std::vector<double>>>(s, "box", "oracle");
    o.box_lo.clear();
    o.box_hi.clear();
    for (const auto& axis : box) {
      if (axis.size() != 2 || !(axis[0] < axis[1])) throw ConfigError("oracle.box needs [lo, hi] pairs");
      o.box_lo.push_back(axis[0]);
      o.box_hi.push_back(axis[1]);
    }
  }
  if (s.contains("tolerance")) o.tolerance = get<double>(s, "tolerance", "oracle");
  if (s.contains("K")) o.K = get<int>(s, "K", "oracle");
  if (s.contains("controls_per_axis")) o.controls_per_axis = get<int>(s, "controls_per_axis", "oracle");
  if (o.K < 1 || o.controls_per_axis < 1) throw ConfigError("oracle.K and controls_per_axis must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"problem", "overrides", "K", "solver", "decomposition", "substeps", "mitigate",
                     "output_dir", "seed", "oracle", "K_list"},
                 "config");
  RunConfig c;
  if (!j.contains("problem")) throw ConfigError("config needs a 'problem'");
  c.problem = get<std::string>(j, "problem", "config");
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), c.problem) == names.end()) {
    throw ConfigError("unknown problem '" + c.problem + "'");
  }
  if (j.contains("overrides")) c.overrides = get<std::map<std::string, double>>(j, "overrides", "config");
  if (j.contains("K")) c.K = get<int>(j, "K", "config");
  if (c.K < 1) throw ConfigError("K must be at least 1");
  if (j.contains("solver")) parse_solver(j.at("solver"), c.solver);
  if (j.contains("decomposition")) {
    try {
      c.decomposition = parse_decompose_mode(get<std::string>(j, "decomposition", "config"));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("substeps")) c.substeps = get<int>(j, "substeps", "config");
  if (c.substeps < 1) throw ConfigError("substeps must be at least 1");
  if (j.contains("mitigate") && !j.at("mitigate").is_null()) {
    try {
      c.mitigate = parse_mitigation_mode(get<std::string>(j, "mitigate", "config"));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("output_dir")) c.output_dir = get<std::string>(j, "output_dir", "config");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", "config");
  c.solver.random_seed = j.contains("solver") && j.at("solver").contains("random_seed")
                             ? c.solver.random_seed
                             : c.seed;
  if (j.contains("oracle")) parse_oracle(j.at("oracle"), c.oracle);
  if (j.contains("K_list")) c.K_list = get<std::vector<int>>(j, "K_list", "config");
  if (c.K_list.empty()) throw ConfigError("K_list must not be empty");
  for (std::size_t i = 0; i < c.K_list.size(); ++i) {
    if (c.K_list[i] < 1 || (i > 0 && c.K_list[i] <= c.K_list[i - 1])) {
      throw ConfigError("K_list must be positive and increasing");
    }
  }
  try {
    (void)make_builtin(c.problem, c.overrides);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace laxoc::cli
