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

#include <string>

#include <gtest/gtest.h>

#include "lorentz_ot/scenarios.hpp"

namespace lot {
namespace {

std::string failures(const Report& r) {
  std::string out;
  for (const auto& c : r.checks) {
    if (c.gating && !c.passed) out += c.name + " ";
  }
  return out;
}

class AllScenarios : public ::testing::TestWithParam<std::string> {};

TEST_P(AllScenarios, PassAtDefaults) {
  const auto r = run_scenario(GetParam(), ScenarioConfig{});
  EXPECT_EQ(r.scenario, GetParam());
  EXPECT_FALSE(r.checks.empty());
  EXPECT_TRUE(r.passed()) << failures(r);
  const auto j = Json::parse(report_to_json(r).dump());
  EXPECT_EQ(j["passed"], r.passed());
  EXPECT_EQ(j["checks"].size(), r.checks.size());
}

INSTANTIATE_TEST_SUITE_P(Registry, AllScenarios, ::testing::ValuesIn(scenario_names()),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (auto& ch : s) {
                             if (ch == '-') ch = '_';
                           }
                           return s;
                         });

TEST(Scenarios, UnknownNameThrows) {
  EXPECT_THROW(run_scenario("nosuch", ScenarioConfig{}), std::invalid_argument);
}

TEST(Discontinuity, OtherExponents) {
  for (double p : {0.3, 0.7}) {
    ScenarioConfig cfg;
    cfg.p = p;
    const auto r = run_example_discontinuity(cfg);
    EXPECT_TRUE(r.passed()) << p << ": " << failures(r);
  }
}

TEST(Discontinuity, ZeroJumpIsDetected) {
  ScenarioConfig cfg;
  cfg.a = 0.0;
  const auto r = run_example_discontinuity(cfg);
  const Check* c = r.find("phi_x0_zero");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_FALSE(r.passed());
}

TEST(Lightcone, SweepOverEpsAndThickness) {
  for (double eps : {0.02, 0.05, 0.1}) {
    for (double thickness : {0.5, 0.75, 1.0}) {
      ScenarioConfig cfg;
      cfg.eps = eps;
      cfg.thickness = thickness;
      const auto r = run_example_lightcone_coupling(cfg);
      EXPECT_TRUE(r.passed()) << eps << " " << thickness << ": " << failures(r);
      const Check* touch = r.find("touches_null_cone");
      ASSERT_NE(touch, nullptr);
      EXPECT_TRUE(touch->passed);
    }
  }
}

TEST(Lightcone, RejectsBadParameters) {
  ScenarioConfig cfg;
  cfg.heavy_mass = 0.4;
  EXPECT_THROW(run_example_lightcone_coupling(cfg), std::invalid_argument);
}

TEST(AppendixB, RightAnchorStillPasses) {
  ScenarioConfig cfg;
  cfg.anchor = "right";
  const auto r = run_appendixB_causal_compactness(cfg);
  EXPECT_TRUE(r.passed()) << failures(r);
  cfg.anchor = "middle";
  EXPECT_THROW(run_appendixB_causal_compactness(cfg), std::invalid_argument);
}

TEST(Duality, OtherSeedsAndExponents) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.trials = 40;
    cfg.p = 0.3 + 0.2 * static_cast<double>(seed - 1);
    const auto r = run_strong_duality_battery(cfg);
    EXPECT_TRUE(r.passed()) << seed << ": " << failures(r);
  }
}

TEST(C11, ExplicitTau) {
  ScenarioConfig cfg;
  cfg.tau = 0.1;
  const auto r = run_c11_interpolation(cfg);
  EXPECT_TRUE(r.passed()) << failures(r);
}

TEST(Report, ChecksAndObservations) {
  Report r;
  r.expect_le("a", "a small", 1.0, 2.0);
  r.expect_ge("b", "b large", 1.0, 2.0);
  r.observe("c", "reported only", 5.0, "note");
  EXPECT_TRUE(r.find("a")->passed);
  EXPECT_FALSE(r.find("b")->passed);
  EXPECT_FALSE(r.find("c")->gating);
  EXPECT_EQ(r.find("d"), nullptr);
  EXPECT_FALSE(r.passed());
  Report ok;
  ok.expect_true("t", "holds", true);
  ok.observe("o", "ignored", -1.0, "");
  EXPECT_TRUE(ok.passed());
}

}  // namespace
}  // namespace lot
