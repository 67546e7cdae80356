// Copyright 2026 The lorentz-ot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// lorentz-ot: scenario runs, ad-hoc solves and Lax-Oleinik evolution.
//
// Exit codes: 0 success, 1 failed assertion, 2 usage or parse error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lorentz_ot/io.hpp"
#include "lorentz_ot/scenarios.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kAssertion = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string out = "out";
  bool plots = false;
  double p = 0.5;
  std::uint64_t seed = 7;
  double tol_gap = 1e-9;
  std::size_t trials = 200;
  std::optional<std::size_t> n;
  std::optional<double> t, s, tau;
  std::optional<std::vector<double>> bounds;
  std::optional<double> step;
  std::string anchor = "left";
  std::optional<double> a, eps, thickness, heavy_mass;
};

// Keys accepted in a --config file. Command-line flags take precedence.
void apply_config_file(RunConfig& cfg, const lot::Json& j, const CLI::App& app) {
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  auto given = [&](const char* flag) { return app.count(flag) > 0; };
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "p") {
        if (!given("--p")) cfg.p = value.get<double>();
      } else if (key == "seed") {
        if (!given("--seed")) cfg.seed = value.get<std::uint64_t>();
      } else if (key == "out") {
        if (!given("--out")) cfg.out = value.get<std::string>();
      } else if (key == "plots") {
        if (!given("--plots")) cfg.plots = value.get<bool>();
      } else if (key == "tol_gap") {
        if (!given("--tol-gap")) cfg.tol_gap = value.get<double>();
      } else if (key == "trials") {
        if (!given("--trials")) cfg.trials = value.get<std::size_t>();
      } else if (key == "n") {
        if (!given("--n")) cfg.n = value.get<std::size_t>();
      } else if (key == "t") {
        if (!given("--t")) cfg.t = value.get<double>();
      } else if (key == "s") {
        if (!given("--s")) cfg.s = value.get<double>();
      } else if (key == "tau") {
        if (!given("--tau")) cfg.tau = value.get<double>();
      } else if (key == "grid") {
        if (!given("--bounds") && !given("--step")) {
          const auto g = lot::grid_from_json(value);
          cfg.bounds = std::vector<double>{g.x_min, g.x_min + g.h * (g.nx - 1), g.t_min,
                                           g.t_min + g.h * (g.nt - 1)};
          cfg.step = g.h;
        }
      } else if (key == "anchor") {
        if (!given("--anchor")) cfg.anchor = value.get<std::string>();
      } else if (key == "a") {
        if (!given("--a")) cfg.a = value.get<double>();
      } else if (key == "eps") {
        if (!given("--eps")) cfg.eps = value.get<double>();
      } else if (key == "thickness") {
        if (!given("--thickness")) cfg.thickness = value.get<double>();
      } else if (key == "heavy_mass") {
        if (!given("--heavy-mass")) cfg.heavy_mass = value.get<double>();
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    } catch (const lot::Json::exception& e) {
      throw UsageError("bad value for config key '" + key + "': " + e.what());
    }
  }
}

void validate(const RunConfig& cfg) {
  if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw UsageError("p must lie in (0, 1)");
  if (!(cfg.tol_gap > 0.0)) throw UsageError("tol-gap must be positive");
  if (cfg.trials == 0) throw UsageError("trials must be positive");
  if (cfg.anchor != "left" && cfg.anchor != "right") {
    throw UsageError("anchor must be 'left' or 'right'");
  }
}

lot::ScenarioConfig scenario_config(const RunConfig& cfg) {
  lot::ScenarioConfig sc;
  sc.p = cfg.p;
  sc.seed = cfg.seed;
  sc.trials = cfg.trials;
  sc.tol_gap = cfg.tol_gap;
  sc.n = cfg.n;
  sc.anchor = cfg.anchor;
  if (cfg.a) sc.a = *cfg.a;
  if (cfg.eps) sc.eps = *cfg.eps;
  if (cfg.thickness) sc.thickness = *cfg.thickness;
  if (cfg.heavy_mass) sc.heavy_mass = *cfg.heavy_mass;
  if (cfg.s) sc.s = *cfg.s;
  if (cfg.t) sc.t = *cfg.t;
  sc.tau = cfg.tau;
  return sc;
}

void print_report(const lot::Report& r) {
  std::printf("%s: %s\n", r.scenario.c_str(), r.passed() ? "PASS" : "FAIL");
  for (const auto& c : r.checks) {
    const char* mark = !c.gating ? "info" : (c.passed ? "ok" : "FAIL");
    std::printf("  [%-4s] %-36s %s\n", mark, c.name.c_str(),
                lot::extended_to_string(c.measured).c_str());
  }
}

int cmd_scenario(const RunConfig& cfg) {
  const std::string& name = cfg.inputs.at(0);
  std::vector<std::string> names;
  if (name == "all") {
    names = lot::scenario_names();
  } else {
    const auto& known = lot::scenario_names();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw UsageError("unknown scenario '" + name + "'");
    }
    names.push_back(name);
  }
  const auto sc = scenario_config(cfg);
  std::vector<std::future<lot::Report>> jobs;
  for (const auto& n : names) {
    jobs.push_back(std::async(std::launch::async, [n, sc] { return lot::run_scenario(n, sc); }));
  }
  bool ok = true;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    lot::Report r;
    try {
      r = jobs[k].get();
    } catch (const std::invalid_argument& e) {
      throw UsageError(names[k] + ": " + e.what());
    }
    const std::string dir = names.size() == 1 ? cfg.out : cfg.out + "/" + names[k];
    lot::write_report(r, dir, cfg.plots);
    print_report(r);
    ok = ok && r.passed();
  }
  return ok ? kOk : kAssertion;
}

int cmd_solve(const RunConfig& cfg) {
  lot::DiscreteMeasure mu, nu;
  try {
    mu = lot::measure_from_json(lot::read_json_file(cfg.inputs.at(0)));
    nu = lot::measure_from_json(lot::read_json_file(cfg.inputs.at(1)));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (mu.dimension() != nu.dimension()) throw UsageError("measures differ in dimension");
  const lot::CostParams params(cfg.p);
  const auto matrix = lot::build_cost_matrix(mu, nu, params);
  const auto result = lot::solve_primal(matrix, mu, nu);

  std::vector<lot::Certificate> certs{lot::causal_feasible(mu, nu)};
  bool ok = true;
  if (result.status == lot::TransportStatus::kOptimal) {
    const auto support = lot::support_of(result.coupling);
    auto mono = lot::check_cyclical_monotonicity(support, matrix);
    ok = ok && mono.feasible;
    certs.push_back(std::move(mono));
    lot::Certificate gap;
    gap.kind = lot::CertificateKind::kOptimalityGap;
    gap.gap = lot::dual_gap(result.duals->rows, result.duals->cols, result, matrix);
    gap.feasible = std::abs(*gap.gap) <= cfg.tol_gap;
    ok = ok && gap.feasible;
    certs.push_back(gap);
  }
  std::filesystem::create_directories(cfg.out);
  lot::write_text_file(cfg.out + "/result.json", lot::result_to_json(result, certs).dump(2) + "\n");
  std::printf("status: %s\n", std::string(lot::to_string(result.status)).c_str());
  if (result.status == lot::TransportStatus::kOptimal) {
    std::printf("primal value: %.17g\nentries: %zu\n", result.primal_value,
                result.coupling.entries.size());
  }
  return ok ? kOk : kAssertion;
}

int cmd_evolve(const RunConfig& cfg) {
  lot::ValueField field;
  try {
    field = lot::value_field_from_json(lot::read_json_file(cfg.inputs.at(0)));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const double t = cfg.t.value_or(1.0);
  if (!(t >= 0.0)) throw UsageError("t must be non-negative");
  if (cfg.tau && !(*cfg.tau > 0.0)) throw UsageError("tau must be positive");
  if (cfg.bounds.has_value() != cfg.step.has_value()) {
    throw UsageError("--bounds and --step go together");
  }
  const lot::CostParams params(cfg.p);

  std::optional<lot::Grid2> grid;
  std::vector<lot::SpacetimePoint> targets = field.carrier;
  if (cfg.bounds) {
    const auto& b = *cfg.bounds;
    if (b.size() != 4 || !(b[0] < b[1]) || !(b[2] < b[3]) || !(*cfg.step > 0.0)) {
      throw UsageError("bounds must be x_lo < x_hi, t_lo < t_hi with a positive step");
    }
    if (!field.carrier.empty() && field.carrier.front().dimension() != 1) {
      throw UsageError("grids are 1+1 dimensional");
    }
    grid = lot::Grid2::covering(b[0], b[1], b[2], b[3], *cfg.step);
    targets = grid->points();
  }

  lot::ValueField out;
  try {
    // With tau the output is T̂_τ T_{t+τ} u, otherwise T_t u.
    out = cfg.tau ? lot::regularized_side(field, t, *cfg.tau, 1.0, targets, params)
                  : lot::lax_forward(field, t, targets, params);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::filesystem::create_directories(cfg.out);
  lot::write_text_file(cfg.out + "/field.json", lot::value_field_to_json(out).dump(2) + "\n");
  if (grid) {
    const lot::GridField gf{*grid, out.values};
    lot::write_text_file(cfg.out + "/field.csv", lot::grid_field_csv(gf));
    if (cfg.plots) {
      const auto& b = *cfg.bounds;
      lot::SvgPlot plot(b[0], b[1], b[2], b[3]);
      plot.title(cfg.tau ? "regularised field" : "forward Lax-Oleinik evolution");
      plot.heatmap(gf);
      lot::write_text_file(cfg.out + "/field.svg", plot.str());
    }
  } else {
    lot::write_text_file(cfg.out + "/field.csv", lot::value_field_csv(out));
  }
  std::printf("evolved %zu points to time %g\n", out.values.size(), out.time);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lorentzian optimal transport toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_path;

  app.add_option("--config", config_path, "JSON file with option values")->check(CLI::ExistingFile);
  app.add_option("--p", cfg.p, "cost exponent, 0 < p < 1");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--out", cfg.out, "output directory");
  app.add_flag("--plots", cfg.plots, "write SVG figures");
  app.add_option("--tol-gap", cfg.tol_gap, "dual gap tolerance");
  app.add_option("--trials", cfg.trials, "duality battery size");
  app.add_option("--n", cfg.n, "sample size");
  app.add_option("--t", cfg.t, "time t");
  app.add_option("--s", cfg.s, "time s");
  app.add_option("--tau", cfg.tau, "regularisation time");
  app.add_option("--bounds", cfg.bounds, "grid box: x_lo x_hi t_lo t_hi")->expected(4);
  app.add_option("--step", cfg.step, "grid step");
  app.add_option("--anchor", cfg.anchor, "chain anchor branch (left|right)");
  app.add_option("--a", cfg.a, "atom weight of the discontinuity example");
  app.add_option("--eps", cfg.eps, "corner offset of the light-cone example");
  app.add_option("--thickness", cfg.thickness, "rectangle thickness");
  app.add_option("--heavy-mass", cfg.heavy_mass, "mass of the heavy block");

  app.fallthrough();
  auto* scenario = app.add_subcommand("scenario", "run a named scenario (or 'all')");
  std::string name, mu_path, nu_path, field_path;
  scenario->add_option("name", name, "scenario name")->required();
  auto* solve = app.add_subcommand("solve", "solve a transport problem from measure files");
  solve->add_option("mu", mu_path, "source measure (JSON)")->required();
  solve->add_option("nu", nu_path, "target measure (JSON)")->required();
  auto* evolve = app.add_subcommand("evolve", "evolve a value field by Lax-Oleinik");
  evolve->add_option("field", field_path, "value field (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (!config_path.empty()) apply_config_file(cfg, lot::read_json_file(config_path), app);
    validate(cfg);
    if (scenario->parsed()) {
      cfg.inputs = {name};
      return cmd_scenario(cfg);
    }
    if (solve->parsed()) {
      cfg.inputs = {mu_path, nu_path};
      return cmd_solve(cfg);
    }
    cfg.inputs = {field_path};
    return cmd_evolve(cfg);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const lot::SchemaError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kAssertion;
  }
}
