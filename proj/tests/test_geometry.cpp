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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lorentz_ot/geometry.hpp"

namespace lot {
namespace {

SpacetimePoint tx(double t, double x) { return SpacetimePoint(t, {x}); }

TEST(Classify, BasicCases) {
  EXPECT_EQ(classify(tx(0, 0), tx(2, 1)), CausalClass::kStrictlyTimelikeFuture);
  EXPECT_EQ(classify(tx(0, 0), point_xt(-1, 1)), CausalClass::kNullFuture);
  EXPECT_EQ(classify(tx(0, 0), tx(0, 0)), CausalClass::kCoincident);
  EXPECT_EQ(classify(tx(0, 0), tx(1, 2)), CausalClass::kSpacelike);
  EXPECT_EQ(classify(tx(0, 0), tx(-2, 1)), CausalClass::kStrictlyTimelikePast);
  EXPECT_EQ(classify(tx(0, 0), tx(-1, 1)), CausalClass::kNullPast);
}

TEST(Classify, ReversalSymmetry) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 500; ++k) {
    const SpacetimePoint a(u(rng), {u(rng), u(rng)});
    const SpacetimePoint b(u(rng), {u(rng), u(rng)});
    EXPECT_EQ(classify(b, a), reversed(classify(a, b)));
  }
}

TEST(Classify, NullToleranceScalesWithTime) {
  EXPECT_EQ(classify(tx(0, 0), tx(1e6, 1e6 - 1e-7)), CausalClass::kNullFuture);
  EXPECT_EQ(classify(tx(0, 0), tx(1, 1 - 1e-9)), CausalClass::kStrictlyTimelikeFuture);
  EXPECT_THROW(classify(tx(0, 0), SpacetimePoint(1, {0, 0})), std::invalid_argument);
}

TEST(LorentzDistance, Values) {
  EXPECT_DOUBLE_EQ(lorentz_distance(tx(0, 0), tx(4, 3)), std::sqrt(7.0));
  EXPECT_EQ(lorentz_distance(tx(0, 0), tx(1, 2)), 0.0);
  EXPECT_DOUBLE_EQ(lorentz_distance(tx(0, 0), tx(2.5, 0)), 2.5);
  EXPECT_EQ(lorentz_distance(tx(0, 0), point_xt(-1, 1)), 0.0);
  EXPECT_DOUBLE_EQ(lorentz_distance(SpacetimePoint(0, {0, 0}), SpacetimePoint(5, {3, 0})), 4.0);
}

TEST(LorentzDistance, ReverseTriangleInequality) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 1000; ++k) {
    const auto x = tx(0, 0);
    const auto y = tx(2 + u(rng), u(rng));
    const auto z = tx(y.t + 2 + u(rng), y.x[0] + u(rng));
    EXPECT_GE(lorentz_distance(x, z) + 1e-12, lorentz_distance(x, y) + lorentz_distance(y, z));
  }
}

TEST(Cost, Values) {
  const CostParams half(0.5);
  EXPECT_DOUBLE_EQ(cost(tx(0, 0), tx(1, 0), half), -1.0);
  EXPECT_EQ(cost(tx(0, 0), tx(0, 1), half), kInf);
  EXPECT_EQ(cost(point_xt(3, -3), point_xt(-1, 1), half), 0.0);
  EXPECT_NEAR(cost(point_xt(0, 0), point_xt(3, 4), half), -1.62658, 1e-5);
  EXPECT_DOUBLE_EQ(cost(point_xt(0, 0), point_xt(3, 4), half), -std::pow(7.0, 0.25));
}

TEST(Cost, ParamsValidated) {
  EXPECT_THROW(CostParams(0.0), std::invalid_argument);
  EXPECT_THROW(CostParams(1.0), std::invalid_argument);
  EXPECT_THROW(CostParams(0.5, -1.0), std::invalid_argument);
}

TEST(CostT, Values) {
  const CostParams half(0.5);
  EXPECT_DOUBLE_EQ(cost_t(4, tx(0, 0), tx(2, 0), half), -std::sqrt(8.0));
  EXPECT_EQ(cost_t(0, tx(1, 1), tx(1, 1), half), 0.0);
  EXPECT_EQ(cost_t(0, tx(1, 1), tx(2, 1), half), kInf);
  EXPECT_THROW(cost_t(-1, tx(0, 0), tx(1, 0), half), std::invalid_argument);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 100; ++k) {
    const auto y = tx(2 + u(rng), u(rng));
    EXPECT_EQ(cost_t(1, tx(0, 0), y, half), cost(tx(0, 0), y, half));
  }
}

TEST(CostT, EqualsTimeTimesLagrangianOfVelocity) {
  // c_t(x,y) = t·L((y − x)/t), the action of the straight line.
  const CostParams params(0.3);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 3);
  for (int k = 0; k < 200; ++k) {
    const double t = u(rng);
    const SpacetimePoint y(u(rng) + 1, {u(rng) - 1.5, 0.2 * u(rng)});
    if (!is_causal_future(classify(SpacetimePoint(0, {0, 0}), y))) continue;
    const TangentVector v{y.t / t, {y.x[0] / t, y.x[1] / t}};
    EXPECT_NEAR(cost_t(t, SpacetimePoint(0, {0, 0}), y, params), t * lagrangian(v, params), 1e-12);
  }
}

TEST(Geodesic, Points) {
  const auto m = geodesic_point(tx(0, 0), tx(2, 0), 0.5);
  EXPECT_EQ(m, tx(1, 0));
  EXPECT_EQ(geodesic_point(tx(0, 0), tx(2, 1), 0.0), tx(0, 0));
  EXPECT_EQ(geodesic_point(tx(0, 0), tx(2, 1), 1.0), tx(2, 1));
  EXPECT_THROW(geodesic_point(tx(0, 0), tx(1, 2), 0.5), std::invalid_argument);
}

TEST(Geodesic, ActionIsAdditive) {
  const CostParams params(0.5);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 200; ++k) {
    const auto x = tx(u(rng), u(rng));
    const auto y = tx(x.t + 2.5 + u(rng), x.x[0] + u(rng));
    const double s = 0.5 + 0.45 * u(rng);
    const auto g = geodesic_point(x, y, s);
    EXPECT_NEAR(cost_t(s, x, g, params) + cost_t(1 - s, g, y, params), cost(x, y, params), 1e-12);
  }
}

TEST(Lagrangian, Values) {
  const CostParams half(0.5);
  EXPECT_DOUBLE_EQ(lagrangian({1, {0}}, half), -1.0);
  EXPECT_EQ(lagrangian({1, {1}}, half), 0.0);
  EXPECT_EQ(lagrangian({-1, {0}}, half), kInf);
  EXPECT_EQ(lagrangian({1, {2}}, half), kInf);
}

TEST(Legendre, Values) {
  const CostParams half(0.5);
  const Covector q = legendre({1, {0}}, half);
  EXPECT_DOUBLE_EQ(q.pt, -0.5);
  EXPECT_DOUBLE_EQ(q.px[0], 0.0);
  const TangentVector v = legendre_inverse({-0.5, {0}}, half);
  EXPECT_NEAR(v.dt, 1.0, 1e-15);
  EXPECT_NEAR(v.dx[0], 0.0, 1e-15);
  EXPECT_THROW(legendre({1, {1}}, half), std::domain_error);
  EXPECT_THROW(legendre({-1, {0}}, half), std::domain_error);
  EXPECT_THROW(legendre_inverse({-1, {1}}, half), std::domain_error);
  EXPECT_THROW(legendre_inverse({1, {0}}, half), std::domain_error);
}

TEST(Legendre, MatchesFiniteDifferenceGradient) {
  const CostParams params(0.4);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 200; ++k) {
    const TangentVector v{2.5 + 0.5 * u(rng), {0.9 * u(rng), 0.9 * u(rng)}};
    const Covector q = legendre(v, params);
    const double h = 1e-6;
    auto L = [&](TangentVector w) { return lagrangian(w, params); };
    TangentVector a = v, b = v;
    a.dt += h;
    b.dt -= h;
    EXPECT_NEAR(q.pt, (L(a) - L(b)) / (2 * h), 1e-7);
    for (std::size_t i = 0; i < 2; ++i) {
      a = v;
      b = v;
      a.dx[i] += h;
      b.dx[i] -= h;
      EXPECT_NEAR(q.px[i], (L(a) - L(b)) / (2 * h), 1e-7);
    }
  }
}

TEST(Legendre, Homogeneity) {
  const CostParams params(0.5);
  const TangentVector v{1.5, {0.4}};
  for (double lambda : {0.1, 2.0, 37.0}) {
    const Covector a = legendre({lambda * v.dt, {lambda * v.dx[0]}}, params);
    const Covector b = legendre(v, params);
    const double f = std::pow(lambda, params.p() - 1.0);
    EXPECT_NEAR(a.pt, f * b.pt, 1e-14);
    EXPECT_NEAR(a.px[0], f * b.px[0], 1e-14);
  }
}

TEST(Legendre, RoundTrips) {
  const CostParams params(0.7);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 1000; ++k) {
    const TangentVector v{1.1 + std::abs(u(rng)), {0.99 * u(rng)}};
    const TangentVector w = legendre_inverse(legendre(v, params), params);
    EXPECT_NEAR(w.dt, v.dt, 1e-10);
    EXPECT_NEAR(w.dx[0], v.dx[0], 1e-10);
    const Covector q{-1.0 - std::abs(u(rng)), {0.9 * u(rng)}};
    const Covector r = legendre(legendre_inverse(q, params), params);
    EXPECT_NEAR(r.pt, q.pt, 1e-10);
    EXPECT_NEAR(r.px[0], q.px[0], 1e-10);
  }
}

TEST(Legendre, NearConeBoundaryStaysFinite) {
  const CostParams params(0.5);
  const TangentVector v = legendre_inverse({-1, {1 - 1e-9}}, params);
  EXPECT_TRUE(std::isfinite(v.dt));
  EXPECT_TRUE(std::isfinite(v.dx[0]));
  EXPECT_GT(v.dt, 1e3);
  EXPECT_EQ(classify_vector(v, 0.0), CausalClass::kStrictlyTimelikeFuture);
}

TEST(Hamiltonian, Values) {
  const CostParams half(0.5);
  EXPECT_NEAR(hamiltonian(legendre({1, {0}}, half), half), 0.5, 1e-15);
  EXPECT_NEAR(hamiltonian(legendre({2, {0}}, half), half), 0.5 * std::sqrt(2.0), 1e-15);
}

TEST(Hamiltonian, FenchelIdentity) {
  const CostParams params(0.5);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 500; ++k) {
    const TangentVector v{1.5 + 0.5 * u(rng), {0.9 * u(rng)}};
    const Covector q = legendre(v, params);
    EXPECT_NEAR(hamiltonian(q, params) + lagrangian(v, params), pairing(q, v), 1e-12);
  }
}

TEST(Hamiltonian, MatchesNumericalSupremum) {
  // H(q) = sup over future causal v of ⟨q,v⟩ − L(v), by brute-force search on
  // the rapidity/norm parametrisation v = r(cosh θ, sinh θ).
  const CostParams params(0.5);
  for (const Covector& q : {Covector{-1.0, {0.3}}, Covector{-0.7, {-0.5}}, Covector{-2.0, {0.0}}}) {
    double best = -kInf;
    for (int i = 1; i <= 3000; ++i) {
      const double r = 0.002 * i;
      for (int j = -300; j <= 300; ++j) {
        const double th = 0.01 * j;
        const TangentVector v{r * std::cosh(th), {r * std::sinh(th)}};
        best = std::max(best, pairing(q, v) - lagrangian(v, params));
      }
    }
    EXPECT_NEAR(hamiltonian(q, params), best, 1e-4);
  }
}

TEST(DualCone, Interior) {
  EXPECT_TRUE(in_dual_cone_interior({-1, {0.5}}));
  EXPECT_FALSE(in_dual_cone_interior({-1, {1}}));
  EXPECT_FALSE(in_dual_cone_interior({1, {0}}));
}

TEST(ExtendedReal, InfinityConventions) {
  EXPECT_EQ(add_for_inf(kInf, -kInf), kInf);
  EXPECT_EQ(add_for_sup(kInf, -kInf), -kInf);
  EXPECT_EQ(sub_for_inf(kInf, kInf), kInf);
  EXPECT_EQ(sub_for_sup(-kInf, -kInf), -kInf);
  EXPECT_EQ(add_for_inf(1.0, 2.0), 3.0);
  EXPECT_EQ(extended_to_string(kInf), "inf");
  EXPECT_EQ(extended_to_string(-kInf), "-inf");
}

}  // namespace
}  // namespace lot
