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

// Acceptance runner: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "lorentz_ot/scenarios.hpp"

namespace {

using lot::Report;
using lot::ScenarioConfig;

struct Outcome {
  bool passed = true;
  std::string detail;
};

void require_checks(const Report& r, std::initializer_list<const char*> names, Outcome& out) {
  for (const char* name : names) {
    const lot::Check* c = r.find(name);
    if (c == nullptr) {
      out.passed = false;
      out.detail += std::string(" missing:") + name;
    } else if (!c->passed) {
      out.passed = false;
      out.detail += " " + r.scenario + "/" + name + "=" + lot::extended_to_string(c->measured);
    }
  }
}

void require_all(const Report& r, Outcome& out) {
  for (const auto& c : r.checks) {
    if (c.gating && !c.passed) {
      out.passed = false;
      out.detail += " " + r.scenario + "/" + c.name + "=" + lot::extended_to_string(c.measured);
    }
  }
}

Outcome timed(double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out = body();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.2f s", secs);
  out.detail += buf;
  if (limit_s > 0.0) {
    std::snprintf(buf, sizeof buf, ", limit %.0f s", limit_s);
    out.detail += buf;
    if (secs >= limit_s) out.passed = false;
  }
  out.detail += ")";
  return out;
}

}  // namespace

int main() {
  Report battery;
  std::vector<std::pair<int, Outcome>> results;

  results.emplace_back(1, timed(10.0, [&] {
    Outcome out;
    ScenarioConfig cfg;
    cfg.trials = 200;
    battery = lot::run_strong_duality_battery(cfg);
    require_checks(battery,
                   {"all_optimal", "marginals", "dual_gap", "dual_gap_lower",
                    "lp_matches_brute_force", "optimal_iff_monotone", "near_null_gap",
                    "near_null_failures", "one_point"},
                   out);
    return out;
  }));

  results.emplace_back(2, timed(0.0, [&] {
    Outcome out;
    require_checks(battery, {"chain_calibration", "chain_subsolution", "chain_dual_gap"}, out);
    return out;
  }));

  results.emplace_back(3, timed(30.0, [] {
    Outcome out;
    ScenarioConfig cfg;
    cfg.p = 0.5;
    cfg.n = 400;
    require_all(lot::run_example_lightcone_coupling(cfg), out);
    for (double thickness : {0.5, 0.75, 1.0}) {
      for (double eps : {0.02, 0.05, 0.1}) {
        ScenarioConfig sweep = cfg;
        sweep.eps = eps;
        sweep.thickness = thickness;
        require_all(lot::run_example_lightcone_coupling(sweep), out);
      }
    }
    return out;
  }));

  results.emplace_back(4, timed(0.0, [] {
    Outcome out;
    for (std::size_t n : {16, 64}) {
      ScenarioConfig cfg;
      cfg.n = n;
      cfg.anchor = "left";
      require_checks(lot::run_appendixB_causal_compactness(cfg),
                     {"drawn_coupling_causal", "optimal", "right_side_unreachable",
                      "left_side_finite"},
                     out);
    }
    return out;
  }));

  results.emplace_back(5, timed(0.0, [] {
    Outcome out;
    ScenarioConfig cfg;
    cfg.p = 0.5;
    cfg.a = -10.0;
    require_all(lot::run_example_discontinuity(cfg), out);
    return out;
  }));

  results.emplace_back(6, timed(0.0, [] {
    Outcome out;
    require_all(lot::run_example_unbounded_subdiff(ScenarioConfig{}), out);
    return out;
  }));

  results.emplace_back(7, timed(0.0, [] {
    Outcome out;
    require_all(lot::run_semigroup_laws(ScenarioConfig{}), out);
    return out;
  }));

  results.emplace_back(8, timed(60.0, [] {
    Outcome out;
    require_all(lot::run_c11_interpolation(ScenarioConfig{}), out);
    return out;
  }));

  bool all = true;
  for (const auto& [k, out] : results) {
    std::printf("criterion %d: %s%s\n", k, out.passed ? "PASS" : "FAIL", out.detail.c_str());
    all = all && out.passed;
  }
  return all ? 0 : 1;
}
