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

#include "laxoc/cli/commands.hpp"

#include "laxoc/csv.hpp"
#include "laxoc/oracle.hpp"
#include "laxoc/problem.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

namespace laxoc::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::filesystem::path prepare_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "'");
  return p;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json convexity_json(const ConvexityReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"name", e.name}, {"status", to_string(e.status)}, {"detail", e.detail}});
  }
  return {{"condition1", to_string(r.condition1)},
          {"condition2", to_string(r.condition2)},
          {"joint_set", to_string(r.joint_set)},
          {"entries", entries}};
}

std::vector<double> node_times(const TimeGrid& grid) {
  std::vector<double> t(static_cast<std::size_t>(grid.K()) + 1);
  for (int k = 0; k <= grid.K(); ++k) t[k] = grid.t(k);
  return t;
}

double max_abs_coord(const std::vector<Vec>& states, int i) {
  double m = 0.0;
  for (const auto& x : states) m = std::max(m, std::abs(x[i]));
  return m;
}

}  // namespace

int worker_threads() {
  if (const char* env = std::getenv("LAXOC_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

DecompositionSummary summarize_decomposition(const ProblemSpec& spec, const TimeGrid& grid,
                                             const SolveResult& sol,
                                             const ControlDecomposition& decomps) {
  DecompositionSummary s;
  s.min_weight = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid.K(); ++k) {
    const auto& atoms = decomps.steps[k];
    const auto c = check_decomposition(spec, grid.t(k), sol.x_star[k], sol.beta_star[k], atoms);
    s.min_weight = std::min(s.min_weight, c.min_weight);
    s.max_atoms = std::max(s.max_atoms, static_cast<double>(atoms.size()));
    s.weight_sum_error = std::max(s.weight_sum_error, c.weight_sum_error);
    s.reconstruction = std::max(s.reconstruction, c.reconstruction);
    s.dynamics = std::max(s.dynamics, c.dynamics);
    s.cost = std::max(s.cost, c.cost);
    s.control_set = std::max(s.control_set, c.control_set);
  }
  return s;
}

PipelineResult run_pipeline(const RunConfig& config, int K) {
  PipelineResult r;
  auto t0 = Clock::now();
  r.spec = make_builtin(config.problem, config.overrides);
  r.grid = make_grid(r.spec.t0, r.spec.T, K);
  const auto program = transcribe(r.spec, r.grid);
  r.timings["transcribe"] = seconds_since(t0);

  t0 = Clock::now();
  r.solution = solve(program, config.solver);
  r.timings["solve"] = seconds_since(t0);
  if (!r.converged()) return r;

  t0 = Clock::now();
  r.decomposition = decompose_trajectory(r.spec, r.grid, r.solution.x_star, r.solution.beta_star,
                                         config.decomposition);
  r.decomposition_check = summarize_decomposition(r.spec, r.grid, r.solution, r.decomposition);
  r.timings["decompose"] = seconds_since(t0);

  t0 = Clock::now();
  r.alpha = synthesize_alpha(switch_schedule(r.grid, r.decomposition));
  r.rollout = integrate(r.spec, r.alpha, r.spec.initial_state, config.substeps);
  r.gaps = gaps(r.solution, r.rollout, r.grid);
  r.growth = check_growth_bound(r.spec, r.rollout);
  r.max_state_constraint = max_state_constraint(r.spec, r.rollout);
  r.timings["rollout"] = seconds_since(t0);

  if (config.mitigate) {
    t0 = Clock::now();
    MitigationSummary m;
    m.mode = *config.mitigate;
    m.control = mitigate_switching(r.decomposition, r.solution, r.spec, r.grid, m.mode);
    m.rollout = integrate(r.spec, m.control, r.spec.initial_state, config.substeps);
    m.gaps = gaps(r.solution, m.rollout, r.grid);
    r.mitigation = std::move(m);
    r.timings["mitigate"] = seconds_since(t0);
  }
  return r;
}

int cmd_solve(const RunConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  const auto dir = prepare_dir(config.output_dir);
  auto r = run_pipeline(config, config.K);
  const auto& sol = r.solution;
  log << config.problem << " K=" << config.K << ": " << to_string(sol.status)
      << " objective " << sol.objective << '\n';

  json summary;
  summary["problem"] = config.problem;
  summary["K"] = config.K;
  summary["delta"] = r.grid.delta();
  summary["status"] = to_string(sol.status);
  summary["objective"] = sol.objective;
  summary["iterations"] = sol.iterations;
  summary["residuals"] = {{"dynamics", sol.residuals.dynamics},
                          {"initial", sol.residuals.initial},
                          {"control_set", sol.residuals.control_set},
                          {"state_constraint", sol.residuals.state_constraint}};
  summary["convexity"] = convexity_json(check_convexity_conditions(r.spec));

  if (!r.converged()) {
    summary["message"] = sol.message;
    write_json(dir / "summary.json", summary);
    write_json(dir / "timings.json", r.timings);
    log << "solver did not converge: " << sol.message << '\n';
    return kExitNotConverged;
  }

  const auto& dc = r.decomposition_check;
  summary["decomposition"] = {{"mode", to_string(config.decomposition)},
                              {"min_weight", dc.min_weight},
                              {"max_atoms", dc.max_atoms},
                              {"weight_sum_error", dc.weight_sum_error},
                              {"reconstruction", dc.reconstruction},
                              {"dynamics", dc.dynamics},
                              {"cost", dc.cost},
                              {"control_set", dc.control_set}};
  summary["rollout"] = {{"substeps", config.substeps},
                        {"cost", r.rollout.cost},
                        {"sup_gap", r.gaps.sup_gap},
                        {"cost_gap", r.gaps.cost_gap},
                        {"switch_count", r.alpha.switch_count()},
                        {"pieces", r.alpha.pieces()},
                        {"control_set_residual", r.alpha.control_set_residual(r.spec.control_set)},
                        {"growth_constant", r.growth.constant},
                        {"growth_max_excess", r.growth.max_excess}};
  summary["switch_count"] = r.alpha.switch_count();
  summary["sup_gap"] = r.gaps.sup_gap;
  summary["cost_gap"] = r.gaps.cost_gap;
  if (r.spec.has_state_constraint()) {
    summary["max_state_constraint"] = r.max_state_constraint;
  }
  if (r.spec.builtin == BuiltinId::kGear4d) {
    summary["max_abs_x2"] = max_abs_coord(r.solution.x_star, 1);
    summary["rollout_max_abs_x2"] = max_abs_coord(r.rollout.states, 1);
  }
  summary["initial_state"] = vec_json(r.spec.initial_state);
  summary["final_state"] = vec_json(sol.x_star.back());

  const auto times = node_times(r.grid);
  write_trajectory_csv((dir / "lax_trajectory.csv").string(), times, sol.x_star);
  write_control_csv((dir / "control.csv").string(), r.alpha);
  write_trajectory_csv((dir / "rollout.csv").string(), r.rollout.times, r.rollout.states);
  if (r.spec.builtin == BuiltinId::kFormation12d) {
    for (int l = 0; l < 3; ++l) {
      const std::vector<int> coords{4 * l, 4 * l + 1, 4 * l + 2, 4 * l + 3};
      const std::string tag = "agent" + std::to_string(l + 1);
      write_trajectory_csv((dir / (tag + "_lax.csv")).string(), times, sol.x_star, coords);
      write_trajectory_csv((dir / (tag + "_rollout.csv")).string(), r.rollout.times,
                           r.rollout.states, coords);
      write_control_csv((dir / (tag + "_control.csv")).string(), r.alpha, {2 * l, 2 * l + 1});
    }
  }
  if (r.mitigation) {
    const auto& m = *r.mitigation;
    summary["mitigation"] = {{"mode", to_string(m.mode)},
                             {"certified", false},
                             {"switch_count", m.control.switch_count()},
                             {"cost", m.rollout.cost},
                             {"sup_gap", m.gaps.sup_gap},
                             {"cost_gap", m.gaps.cost_gap}};
    write_control_csv((dir / "mitigated_control.csv").string(), m.control);
    write_trajectory_csv((dir / "mitigated_rollout.csv").string(), m.rollout.times,
                         m.rollout.states);
  }
  write_json(dir / "summary.json", summary);
  r.timings["total"] = seconds_since(start);
  write_json(dir / "timings.json", r.timings);
  log << "sup_gap " << r.gaps.sup_gap << ", cost_gap " << r.gaps.cost_gap << ", switches "
      << r.alpha.switch_count() << '\n';
  return kExitOk;
}

int cmd_oracle(const RunConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  const auto& oc = config.oracle;
  const ProblemSpec spec = make_builtin(config.problem, config.overrides);
  const int n = spec.state_dim;
  const bool hjb = oc.mode == "hjb";
  if (hjb && n > 3) {
    throw ConfigError("hjb oracle supports at most 3 states, " + config.problem + " has " +
                      std::to_string(n));
  }
  if (!hjb && oc.K > 8) throw ConfigError("brute oracle supports K <= 8");
  const int K = hjb ? config.K : oc.K;
  const auto dir = prepare_dir(config.output_dir);

  const auto lax = run_pipeline(config, K);
  if (!lax.converged()) {
    log << "solver did not converge: " << lax.solution.message << '\n';
    return kExitNotConverged;
  }

  json report;
  report["problem"] = config.problem;
  report["mode"] = oc.mode;
  report["K"] = K;
  OracleComparison cmp;
  try {
    if (hjb) {
      std::vector<int> res = oc.resolution.empty() ? std::vector<int>(n, 201) : oc.resolution;
      Vec lo = Vec::Constant(n, -2.0), hi = Vec::Constant(n, 2.0);
      if (!oc.box_lo.empty()) {
        lo = Eigen::Map<const Vec>(oc.box_lo.data(), static_cast<Eigen::Index>(oc.box_lo.size()));
        hi = Eigen::Map<const Vec>(oc.box_hi.data(), static_cast<Eigen::Index>(oc.box_hi.size()));
      }
      HjbOptions opts;
      opts.threads = worker_threads();
      const auto v = hjb_grid_solve(spec, lo, hi, res, lax.grid, opts);
      const double value = v.value(0, spec.initial_state);
      cmp = compare(lax.solution.objective, value, oc.tolerance.value_or(2e-2));
      report["resolution"] = res;
      report["box"] = {vec_json(lo), vec_json(hi)};
      write_value_slice_csv((dir / "value_t0.csv").string(), v, 0);
    } else {
      const auto controls = spec.control_set.sample_per_axis(oc.controls_per_axis);
      const auto bf = brute_force(spec, lax.grid, controls);
      if (!std::isfinite(bf.cost)) throw ConfigError("brute oracle: every sequence is infeasible");
      cmp = compare_relaxation(lax.solution.objective, bf.cost, oc.tolerance.value_or(1e-4));
      report["controls_per_axis"] = oc.controls_per_axis;
      report["evaluated"] = bf.evaluated;
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  report["lax"] = cmp.lax;
  report["oracle"] = cmp.oracle;
  report["gap"] = cmp.gap;
  report["tolerance"] = cmp.tolerance;
  report["pass"] = cmp.pass;
  report["runtime_seconds"] = seconds_since(start);
  write_json(dir / "oracle.json", report);
  log << oc.mode << " oracle: lax " << cmp.lax << ", oracle " << cmp.oracle << ", gap " << cmp.gap
      << (cmp.pass ? " pass" : " FAIL") << '\n';
  return cmp.pass ? kExitOk : kExitCompareFailed;
}

int cmd_convergence(const RunConfig& config, std::ostream& log) {
  const auto dir = prepare_dir(config.output_dir);
  const std::size_t rows = config.K_list.size();
  std::vector<PipelineResult> results(rows);
  std::vector<std::string> errors(rows);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows; i = next++) {
      try {
        results[i] = run_pipeline(config, config.K_list[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int threads = std::min<int>(worker_threads(), static_cast<int>(rows));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<std::vector<double>> table;
  int code = kExitOk;
  for (std::size_t i = 0; i < rows; ++i) {
    const int K = config.K_list[i];
    if (!errors[i].empty()) throw std::runtime_error("K=" + std::to_string(K) + ": " + errors[i]);
    const auto& r = results[i];
    if (!r.converged()) {
      log << "K=" << K << ": solver did not converge: " << r.solution.message << '\n';
      code = kExitNotConverged;
      continue;
    }
    table.push_back({static_cast<double>(K), r.grid.delta(), r.solution.objective, r.gaps.sup_gap,
                     r.gaps.cost_gap, static_cast<double>(r.alpha.switch_count())});
    log << "K=" << K << " objective " << r.solution.objective << " sup_gap " << r.gaps.sup_gap
        << " cost_gap " << r.gaps.cost_gap << '\n';
  }
  if (code != kExitOk) return code;
  write_csv((dir / "convergence.csv").string(),
            {"K", "delta", "objective", "sup_gap", "cost_gap", "switch_count"}, table);
  return kExitOk;
}

int cmd_list_problems(std::ostream& out) {
  for (const auto& name : builtin_names()) {
    const auto spec = make_builtin(name);
    out << name << "  n=" << spec.state_dim << " m=" << spec.control_dim << " T=" << spec.T
        << (spec.has_state_constraint() ? "  state-constrained" : "") << '\n';
    for (const auto& [key, value] : builtin_tunables(name)) out << "    " << key << " = " << value << '\n';
  }
  return kExitOk;
}

}  // namespace laxoc::cli
