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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "lorentz_ot/io.hpp"

#ifndef LOT_CLI_PATH
#error "LOT_CLI_PATH must name the lorentz-ot executable"
#endif

namespace lot {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("lorentz_ot_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(LOT_CLI_PATH) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string file(const std::string& name, const std::string& text) const {
    const auto path = (dir_ / name).string();
    write_text_file(path, text);
    return path;
  }

  std::string out() const { return (dir_ / "out").string(); }

  fs::path dir_;
};

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("scenario nosuch --out " + out()), 2);
  EXPECT_EQ(run("scenario discontinuity --p 1.5 --out " + out()), 2);
  EXPECT_EQ(run("scenario discontinuity --p 0 --out " + out()), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  const auto cfg = file("cfg.json", R"({"p": 0.5, "colour": "red"})");
  EXPECT_EQ(run("--config " + cfg + " scenario discontinuity --out " + out()), 2);
  EXPECT_EQ(run("--anchor middle scenario appendixB-causal-compactness --out " + out()), 2);
}

TEST_F(Cli, ConfigFileValuesAndOverrides) {
  const auto cfg = file("cfg.json", R"({"p": 0.3, "trials": 20})");
  EXPECT_EQ(run("--config " + cfg + " scenario duality-battery --out " + out()), 0);
  auto report = read_json_file(out() + "/report.json");
  EXPECT_EQ(report["parameters"]["p"], 0.3);
  EXPECT_EQ(run("--config " + cfg + " --p 0.6 scenario duality-battery --out " + out()), 0);
  report = read_json_file(out() + "/report.json");
  EXPECT_EQ(report["parameters"]["p"], 0.6);
}

TEST_F(Cli, SolveTimelikePair) {
  const auto mu = file("mu.json", R"({"points": [[0, 0]], "weights": [1]})");
  const auto nu = file("nu.json", R"({"points": [[2, 1]], "weights": [1]})");
  ASSERT_EQ(run("solve " + mu + " " + nu + " --out " + out()), 0);
  const auto r = read_json_file(out() + "/result.json");
  EXPECT_EQ(r["status"], "Optimal");
  ASSERT_EQ(r["entries"].size(), 1u);
  EXPECT_EQ(r["entries"][0][2], 1.0);
  EXPECT_NEAR(r["primal_value"].get<double>(), -std::pow(3.0, 0.25), 1e-15);
  bool have_gap = false;
  for (const auto& c : r["certificates"]) {
    if (c["kind"] == "OptimalityGap") {
      have_gap = true;
      EXPECT_LE(std::abs(c["gap"].get<double>()), 1e-9);
    }
  }
  EXPECT_TRUE(have_gap);
}

TEST_F(Cli, SolveSpacelikePairIsInfeasibleNotAnError) {
  const auto mu = file("mu.json", R"({"points": [[0, 0]], "weights": [1]})");
  const auto nu = file("nu.json", R"({"points": [[1, 2]], "weights": [1]})");
  ASSERT_EQ(run("solve " + mu + " " + nu + " --out " + out()), 0);
  const auto r = read_json_file(out() + "/result.json");
  EXPECT_EQ(r["status"], "InfeasibleNoCausalCoupling");
  EXPECT_EQ(r["primal_value"], "inf");
  EXPECT_EQ(r["certificates"][0]["feasible"], false);
}

TEST_F(Cli, SolveRejectsBadInput) {
  const auto good = file("good.json", R"({"points": [[0, 0]], "weights": [1]})");
  const auto bad = file("bad.json", R"({"points": [[0, 0]], "weights": [0.5]})");
  const auto junk = file("junk.json", "{");
  const auto extra = file("extra.json", R"({"points": [[0, 0]], "weights": [1], "mass": 1})");
  const auto d2 = file("d2.json", R"({"points": [[3, 0, 0]], "weights": [1]})");
  EXPECT_EQ(run("solve " + good + " " + bad + " --out " + out()), 2);
  EXPECT_EQ(run("solve " + good + " " + junk + " --out " + out()), 2);
  EXPECT_EQ(run("solve " + good + " " + extra + " --out " + out()), 2);
  EXPECT_EQ(run("solve " + good + " " + d2 + " --out " + out()), 2);
  EXPECT_EQ(run("solve " + good + " " + (dir_ / "missing.json").string() + " --out " + out()),
            2);
}

TEST_F(Cli, EvolveValidation) {
  const auto f = file("f.json", R"({"points": [[0, 0]], "values": [0]})");
  EXPECT_EQ(run("evolve " + f + " --t -1 --out " + out()), 2);
  EXPECT_EQ(run("evolve " + f + " --tau 0 --out " + out()), 2);
  EXPECT_EQ(run("evolve " + f + " --step 0.1 --out " + out()), 2);
  EXPECT_EQ(run("evolve " + f + " --bounds 1 0 0 1 --step 0.1 --out " + out()), 2);
}

TEST_F(Cli, EvolveAtZeroIsIdentity) {
  const auto f = file("f.json", R"({"points": [[0, 0], [1, 0.5]], "values": [0.25, "-inf"]})");
  ASSERT_EQ(run("evolve " + f + " --t 0 --out " + out()), 0);
  const auto v = value_field_from_json(read_json_file(out() + "/field.json"));
  ASSERT_EQ(v.values.size(), 2u);
  EXPECT_EQ(v.values[0], 0.25);
  EXPECT_EQ(v.values[1], -kInf);
}

TEST_F(Cli, EvolveSingleSourceOnGrid) {
  const auto f = file("f.json", R"({"points": [[0, 0]], "values": [0]})");
  ASSERT_EQ(run("evolve " + f + " --t 1 --bounds -1 1 0.1 2 --step 0.1 --plots --out " +
                out()),
            0);
  EXPECT_TRUE(fs::exists(out() + "/field.csv"));
  EXPECT_TRUE(fs::exists(out() + "/field.svg"));
  const auto v = value_field_from_json(read_json_file(out() + "/field.json"));
  const CostParams half(0.5);
  std::size_t finite = 0;
  for (std::size_t k = 0; k < v.carrier.size(); ++k) {
    const auto expected = cost_t(1.0, point_xt(0, 0), v.carrier[k], half);
    if (is_finite(expected)) {
      ++finite;
      EXPECT_NEAR(v.values[k], expected, 1e-14);
    } else {
      EXPECT_EQ(v.values[k], kInf);
    }
  }
  EXPECT_GT(finite, 0u);
  EXPECT_LT(finite, v.carrier.size());
}

TEST_F(Cli, EvolveRegularised) {
  const std::string text = R"({"points": [[0, -0.5], [0, 0], [0, 0.5]], "values": [0, 0.1, 0]})";
  const auto f = file("f.json", text);
  ASSERT_EQ(run("evolve " + f + " --t 0.5 --tau 0.25 --bounds -0.5 0.5 0.5 1 --step 0.25 --out " +
                out()),
            0);
  const auto v = value_field_from_json(read_json_file(out() + "/field.json"));
  const auto phi = value_field_from_json(Json::parse(text));
  const auto grid = Grid2::covering(-0.5, 0.5, 0.5, 1, 0.25);
  const auto pts = grid.points();
  const auto expected = regularized_side(phi, 0.5, 0.25, 1.0, pts, CostParams(0.5));
  ASSERT_EQ(v.values.size(), expected.values.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (is_finite(expected.values[k])) {
      EXPECT_NEAR(v.values[k], expected.values[k], 1e-14);
    } else {
      EXPECT_EQ(v.values[k], expected.values[k]);
    }
  }
}

TEST_F(Cli, ScenarioWritesReport) {
  ASSERT_EQ(run("scenario lightcone-coupling --plots --out " + out()), 0);
  const auto r = read_json_file(out() + "/report.json");
  EXPECT_EQ(r["scenario"], "lightcone-coupling");
  EXPECT_EQ(r["passed"], true);
  bool any_svg = false;
  for (const auto& e : fs::directory_iterator(out())) {
    any_svg = any_svg || e.path().extension() == ".svg";
  }
  EXPECT_TRUE(any_svg);
}

TEST_F(Cli, DualityBatteryWithSeed) {
  EXPECT_EQ(run("scenario duality-battery --trials 200 --seed 7 --out " + out()), 0);
  EXPECT_TRUE(fs::exists(out() + "/report.json"));
}

TEST_F(Cli, AllScenariosInSubdirectories) {
  ASSERT_EQ(run("scenario all --out " + out()), 0);
  EXPECT_TRUE(fs::exists(out() + "/semigroup-laws/report.json"));
  EXPECT_TRUE(fs::exists(out() + "/discontinuity/report.json"));
}

TEST_F(Cli, FailingCheckExitsOne) {
  EXPECT_EQ(run("scenario discontinuity --a 0 --out " + out()), 1);
}

}  // namespace
}  // namespace lot
