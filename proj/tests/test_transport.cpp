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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "lorentz_ot/transport.hpp"

namespace lot {
namespace {

std::vector<SpacetimePoint> random_points(std::mt19937_64& rng, std::size_t n, double t_lo,
                                          double t_hi) {
  std::uniform_real_distribution<double> ux(0, 1), ut(t_lo, t_hi);
  std::vector<SpacetimePoint> pts;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = ux(rng);
    pts.push_back(point_xt(x, ut(rng)));
  }
  return pts;
}

// Minimum over permutation couplings, +∞ when none is causal.
double brute_force(const CostMatrix& c) {
  std::vector<std::size_t> perm(c.rows());
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInf;
  do {
    double v = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) v += c(i, perm[i]);
    best = std::min(best, v / static_cast<double>(perm.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

TEST(CostMatrix, Entries) {
  const CostParams half(0.5);
  const auto m = build_cost_matrix(DiscreteMeasure::dirac(SpacetimePoint(0, {0})),
                                   DiscreteMeasure::dirac(SpacetimePoint(1, {0})), half);
  EXPECT_EQ(m(0, 0), -1.0);
  const auto s = build_cost_matrix(DiscreteMeasure::dirac(point_xt(0, 0)),
                                   DiscreteMeasure::dirac(point_xt(2, 1)), half);
  EXPECT_EQ(s(0, 0), kInf);
  EXPECT_FALSE(s.finite(0, 0));
  EXPECT_EQ(s.causal_class(0, 0), CausalClass::kSpacelike);
  const auto e = build_cost_matrix(DiscreteMeasure::dirac(point_xt(0, 0)),
                                   DiscreteMeasure::dirac(point_xt(3, 4)), half);
  EXPECT_NEAR(e(0, 0), -1.62658, 1e-5);
}

TEST(SolvePrimal, TrivialCases) {
  const CostParams half(0.5);
  const auto mu = DiscreteMeasure::dirac(point_xt(0, 0));
  const auto far = DiscreteMeasure::dirac(point_xt(5, 1));
  const auto r0 = solve_primal(build_cost_matrix(mu, far, half), mu, far);
  EXPECT_EQ(r0.status, TransportStatus::kInfeasibleNoCausalCoupling);
  EXPECT_FALSE(r0.duals.has_value());

  const auto nu = DiscreteMeasure::dirac(point_xt(0.5, 2));
  const auto m = build_cost_matrix(mu, nu, half);
  const auto r1 = solve_primal(m, mu, nu);
  ASSERT_EQ(r1.status, TransportStatus::kOptimal);
  ASSERT_EQ(r1.coupling.entries.size(), 1u);
  EXPECT_EQ(r1.primal_value, m(0, 0));
}

TEST(SolvePrimal, HandComputedTwoByTwo) {
  // Sources at x = 0, 1 (t = 0), targets at x = 0, 1 (t = 2). Straight
  // transport gives −√2 per unit; crossing gives −3^{1/4}.
  const CostParams half(0.5);
  const auto mu = DiscreteMeasure::uniform({point_xt(0, 0), point_xt(1, 0)});
  const auto nu = DiscreteMeasure::uniform({point_xt(0, 2), point_xt(1, 2)});
  const auto m = build_cost_matrix(mu, nu, half);
  const auto r = solve_primal(m, mu, nu);
  ASSERT_EQ(r.status, TransportStatus::kOptimal);
  const double straight = -std::sqrt(2.0);
  const double crossed = -std::pow(3.0, 0.25);
  EXPECT_NEAR(r.primal_value, std::min(straight, crossed), 1e-15);
}

TEST(SolvePrimal, MatchesBruteForce) {
  const CostParams params(0.5);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 7;
    const auto mu = DiscreteMeasure::uniform(random_points(rng, n, 0, 1));
    const auto nu = DiscreteMeasure::uniform(random_points(rng, n, 0.8, 2.0));
    const auto m = build_cost_matrix(mu, nu, params);
    const auto r = solve_primal(m, mu, nu);
    const double bf = brute_force(m);
    if (bf == kInf) {
      EXPECT_EQ(r.status, TransportStatus::kInfeasibleNoCausalCoupling);
      EXPECT_FALSE(causal_feasible(mu, nu).feasible);
      continue;
    }
    ASSERT_EQ(r.status, TransportStatus::kOptimal);
    EXPECT_TRUE(causal_feasible(mu, nu).feasible);
    EXPECT_NEAR(r.primal_value, bf, 1e-10);
    EXPECT_TRUE(check_marginals(r.coupling).ok);
    EXPECT_TRUE(is_causal(r.coupling));
    EXPECT_LE(r.coupling.entries.size(), 2 * n - 1);
  }
}

TEST(SolvePrimal, WeightedDualsCloseTheGap) {
  const CostParams params(0.3);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uw(0.1, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 9, m = 1 + trial % 11;
    std::vector<double> a(n), b(m);
    for (auto& v : a) v = uw(rng);
    for (auto& v : b) v = uw(rng);
    const double sa = std::accumulate(a.begin(), a.end(), 0.0);
    const double sb = std::accumulate(b.begin(), b.end(), 0.0);
    for (auto& v : a) v /= sa;
    for (auto& v : b) v /= sb;
    const DiscreteMeasure mu(random_points(rng, n, 0, 1), a);
    const DiscreteMeasure nu(random_points(rng, m, 2.5, 3.5), b);
    const auto mat = build_cost_matrix(mu, nu, params);
    const auto r = solve_primal(mat, mu, nu);
    ASSERT_EQ(r.status, TransportStatus::kOptimal);
    EXPECT_LE(std::abs(dual_gap(r.duals->rows, r.duals->cols, r, mat)), 1e-9);
    // Weak duality against the product plan.
    const auto prod = product_coupling(mu, nu);
    double v = 0.0;
    for (const auto& e : prod.entries) v += e.mass * mat(e.i, e.j);
    EXPECT_LE(r.primal_value, v + 1e-12);
  }
}

TEST(SolvePrimal, RejectsMismatchedInput) {
  const CostParams half(0.5);
  const auto mu = DiscreteMeasure::uniform({point_xt(0, 0), point_xt(1, 0)});
  const auto nu = DiscreteMeasure::dirac(point_xt(0, 3));
  const auto m = build_cost_matrix(mu, nu, half);
  EXPECT_THROW(solve_primal(m, nu, mu), std::invalid_argument);
}

TEST(Monotonicity, OptimalSupportHasNoCycle) {
  const CostParams params(0.5);
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 10;
    const auto mu = DiscreteMeasure::uniform(random_points(rng, n, 0, 1));
    const auto nu = DiscreteMeasure::uniform(random_points(rng, n, 2, 3));
    const auto m = build_cost_matrix(mu, nu, params);
    const auto r = solve_primal(m, mu, nu);
    ASSERT_EQ(r.status, TransportStatus::kOptimal);
    const auto support = support_of(r.coupling);
    const auto cert = check_cyclical_monotonicity(support, m);
    EXPECT_TRUE(cert.feasible);
    EXPECT_EQ(cert.kind, CertificateKind::kMonotonicityCycle);
  }
}

TEST(Monotonicity, SuboptimalPermutationHasNegativeCycle) {
  const CostParams params(0.5);
  std::mt19937_64 rng(31);
  int witnessed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto mu = DiscreteMeasure::uniform(random_points(rng, n, 0, 1));
    const auto nu = DiscreteMeasure::uniform(random_points(rng, n, 2, 3));
    const auto m = build_cost_matrix(mu, nu, params);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<SupportPair> support;
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      support.push_back({i, perm[i]});
      value += m(i, perm[i]) / static_cast<double>(n);
    }
    const bool optimal = value <= brute_force(m) + 1e-9;
    const auto cert = check_cyclical_monotonicity(support, m);
    EXPECT_EQ(cert.feasible, optimal);
    if (!cert.feasible) {
      ++witnessed;
      ASSERT_TRUE(cert.cycle.has_value());
      ASSERT_TRUE(cert.cycle_delta.has_value());
      EXPECT_LT(*cert.cycle_delta, 0.0);
      EXPECT_NEAR(*cert.cycle_delta, exchange_delta(support, *cert.cycle, m), 1e-14);
    }
  }
  EXPECT_GT(witnessed, 20);
}

TEST(Monotonicity, LightconeExchangePair) {
  const CostParams half(0.5);
  const auto mu = DiscreteMeasure::uniform({point_xt(0, 0), point_xt(3, -3)});
  const auto nu = DiscreteMeasure::uniform({point_xt(-1, 1), point_xt(3, 4)});
  const auto m = build_cost_matrix(mu, nu, half);
  const std::vector<SupportPair> hypothetical{{0, 1}, {1, 0}};
  const auto cert = check_cyclical_monotonicity(hypothetical, m);
  EXPECT_FALSE(cert.feasible);
  // Exchange gain: c(x0,y0) + c(x1,y1) − c(x0,y1) − c(x1,y0) = 0 − 7^{1/2} + 7^{1/4}.
  EXPECT_NEAR(*cert.cycle_delta, -std::sqrt(7.0) + std::pow(7.0, 0.25), 1e-12);
  const std::vector<SupportPair> single{{0, 0}};
  EXPECT_TRUE(check_cyclical_monotonicity(single, m).feasible);
}

TEST(Monotonicity, RejectsInfinitePair) {
  const CostParams half(0.5);
  const auto mu = DiscreteMeasure::dirac(point_xt(0, 0));
  const auto nu = DiscreteMeasure::dirac(point_xt(5, 0));
  const auto m = build_cost_matrix(mu, nu, half);
  const std::vector<SupportPair> bad{{0, 0}};
  EXPECT_THROW(check_cyclical_monotonicity(bad, m), std::invalid_argument);
}

TEST(Feasibility, CausalAndStrictlyTimelike) {
  const auto mu = DiscreteMeasure::uniform({point_xt(0, 0), point_xt(1, 0)});
  EXPECT_TRUE(causal_feasible(mu, DiscreteMeasure::uniform({point_xt(0, 10), point_xt(1, 10)})).feasible);
  EXPECT_FALSE(causal_feasible(mu, DiscreteMeasure::uniform({point_xt(5, 0), point_xt(6, 0)})).feasible);
  // Both measures on the spacelike hyperplane t = 0.
  EXPECT_FALSE(strictly_timelike_feasible(mu, DiscreteMeasure::uniform({point_xt(3, 0), point_xt(4, 0)})).feasible);
  const auto x = DiscreteMeasure::dirac(point_xt(0, 0));
  EXPECT_TRUE(causal_feasible(x, x).feasible);
  EXPECT_FALSE(strictly_timelike_feasible(x, x).feasible);
  // Null-only pairs: causal yes, strictly timelike no.
  const auto null_target = DiscreteMeasure::dirac(point_xt(-1, 1));
  EXPECT_TRUE(causal_feasible(x, null_target).feasible);
  EXPECT_FALSE(strictly_timelike_feasible(x, null_target).feasible);
}

TEST(Feasibility, MatchesPerfectMatchingBruteForce) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto mu = DiscreteMeasure::uniform(random_points(rng, n, 0, 1));
    const auto nu = DiscreteMeasure::uniform(random_points(rng, n, 0.5, 1.5));
    const auto m = build_cost_matrix(mu, nu, CostParams(0.5));
    EXPECT_EQ(causal_feasible(mu, nu).feasible, brute_force(m) < kInf);
  }
}

TEST(DualGap, GaugeInvarianceAndInfeasibility) {
  const CostParams half(0.5);
  const auto mu = DiscreteMeasure::uniform({point_xt(0, 0), point_xt(1, 0), point_xt(0.5, 0.2)});
  const auto nu = DiscreteMeasure::uniform({point_xt(0, 3), point_xt(1, 2.5), point_xt(0.2, 3.3)});
  const auto m = build_cost_matrix(mu, nu, half);
  const auto r = solve_primal(m, mu, nu);
  ASSERT_EQ(r.status, TransportStatus::kOptimal);
  auto phi = r.duals->rows, psi = r.duals->cols;
  const double g0 = dual_gap(phi, psi, r, m);
  for (auto& v : phi) v += 1.0;
  for (auto& v : psi) v += 1.0;
  EXPECT_NEAR(dual_gap(phi, psi, r, m), g0, 1e-14);
  psi[1] += 0.5;
  try {
    dual_gap(phi, psi, r, m);
    FAIL() << "expected DualInfeasibleError";
  } catch (const DualInfeasibleError& e) {
    EXPECT_EQ(e.col(), 1u);
    EXPECT_GT(e.violation(), 0.4);
  }
  phi[0] = kInf;
  EXPECT_THROW(dual_gap(phi, r.duals->cols, r, m), std::invalid_argument);
}

TEST(SolvePrimal, TranslationIsOptimal) {
  // ν = μ shifted by a timelike vector: the translation plan is optimal.
  const CostParams params(0.5);
  std::mt19937_64 rng(41);
  const auto xs = random_points(rng, 6, 0, 1);
  std::vector<SpacetimePoint> ys;
  for (const auto& x : xs) ys.push_back(point_xt(x.x[0] + 0.4, x.t + 3.0));
  const auto mu = DiscreteMeasure::uniform(xs), nu = DiscreteMeasure::uniform(ys);
  const auto m = build_cost_matrix(mu, nu, params);
  const auto r = solve_primal(m, mu, nu);
  double translation = 0.0;
  for (std::size_t i = 0; i < 6; ++i) translation += m(i, i) / 6.0;
  EXPECT_NEAR(r.primal_value, translation, 1e-12);
  EXPECT_NEAR(brute_force(m), translation, 1e-12);
}

}  // namespace
}  // namespace lot
