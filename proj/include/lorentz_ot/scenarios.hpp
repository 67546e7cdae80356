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

// Reproductions of the explicit examples and counterexamples. Each run
// returns a Report of named checks with measured values; the runs are
// deterministic given the configuration.

#ifndef LORENTZ_OT_SCENARIOS_HPP_
#define LORENTZ_OT_SCENARIOS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lorentz_ot/io.hpp"

namespace lot {

struct Check {
  std::string name;
  std::string claim;
  double measured = 0.0;
  std::string relation;  // "<=", ">=", "==", "true"
  double threshold = 0.0;
  bool passed = false;
  // Observations are reported but do not decide the outcome.
  bool gating = true;
  std::string note;
};

struct Report {
  std::string scenario;
  Json parameters = Json::object();
  std::vector<Check> checks;
  Json values = Json::object();
  std::vector<std::pair<std::string, std::string>> csv;  // file name, content
  std::vector<std::pair<std::string, std::string>> svg;

  bool passed() const;
  const Check* find(const std::string& name) const;

  Check& expect_le(std::string name, std::string claim, double measured, double threshold);
  Check& expect_ge(std::string name, std::string claim, double measured, double threshold);
  Check& expect_true(std::string name, std::string claim, bool value);
  Check& observe(std::string name, std::string claim, double measured, std::string note);
};

Json report_to_json(const Report& r);

// Writes report.json, the CSV tables and (with plots) the SVG figures into
// `dir`, creating it if needed.
void write_report(const Report& r, const std::string& dir, bool plots);

struct ScenarioConfig {
  double p = 0.5;
  std::uint64_t seed = 7;
  std::size_t trials = 200;
  double tol_gap = kGapTolerance;
  std::optional<std::size_t> n;
  // discontinuity
  double a = -10.0;
  // lightcone-coupling
  double eps = 0.05;
  double thickness = 1.0;
  double heavy_mass = 0.6;
  // appendixB-causal-compactness: "left" or "right"
  std::string anchor = "left";
  // c11-interpolation
  double s = 0.25;
  double t = 0.75;
  std::optional<double> tau;
};

Report run_example_discontinuity(const ScenarioConfig& cfg);
Report run_example_unbounded_subdiff(const ScenarioConfig& cfg);
Report run_example_lightcone_coupling(const ScenarioConfig& cfg);
Report run_appendixB_causal_compactness(const ScenarioConfig& cfg);
Report run_strong_duality_battery(const ScenarioConfig& cfg);
Report run_c11_interpolation(const ScenarioConfig& cfg);
Report run_semigroup_laws(const ScenarioConfig& cfg);

const std::vector<std::string>& scenario_names();

// Throws std::invalid_argument for an unknown name.
Report run_scenario(const std::string& name, const ScenarioConfig& cfg);

}  // namespace lot

#endif  // LORENTZ_OT_SCENARIOS_HPP_
