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
#include <random>

#include <gtest/gtest.h>

#include "lorentz_ot/potentials.hpp"
#include "lorentz_ot/transport.hpp"
#include "lorentz_ot/weakkam.hpp"

namespace lot {
namespace {

std::vector<SpacetimePoint> cloud(std::mt19937_64& rng, std::size_t n, double t_lo, double t_hi) {
  std::uniform_real_distribution<double> ux(0, 1), ut(t_lo, t_hi);
  std::vector<SpacetimePoint> pts;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = ux(rng);
    pts.push_back(point_xt(x, ut(rng)));
  }
  return pts;
}

ValueField random_field(std::mt19937_64& rng, std::size_t n, double t_lo, double t_hi) {
  std::uniform_real_distribution<double> uv(-1, 1);
  ValueField u{cloud(rng, n, t_lo, t_hi), {}, 0.0};
  for (std::size_t k = 0; k < n; ++k) u.values.push_back(uv(rng));
  return u;
}

TEST(LaxOleinik, SingleSource) {
  const CostParams half(0.5);
  const auto x0 = point_xt(0, 0);
  const ValueField u{{x0}, {0.0}, 0.0};
  const auto g = Grid2::covering(-1, 1, 0.5, 2, 0.25).points();
  const auto f = lax_forward(u, 1.0, g, half);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(f.values[k], cost_t(1.0, x0, g[k], half));
  EXPECT_EQ(f.time, 1.0);
  const auto b = lax_backward(ValueField{{point_xt(0, 3)}, {0.5}, 0.0}, 0.7, g, half);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(b.values[k], add_for_sup(0.5, -cost_t(0.7, g[k], point_xt(0, 3), half)));
  }
}

TEST(LaxOleinik, TimeZeroIsIdentityOnCarrier) {
  std::mt19937_64 rng(1);
  const auto u = random_field(rng, 20, 0, 1);
  const auto f = lax_forward(u, 0.0, u.carrier, CostParams(0.5));
  EXPECT_EQ(f.values, u.values);
  EXPECT_THROW(lax_forward(u, -0.1, u.carrier, CostParams(0.5)), std::invalid_argument);
  EXPECT_THROW(lax_backward(u, -0.1, u.carrier, CostParams(0.5)), std::invalid_argument);
}

TEST(LaxOleinik, ParallelMatchesSerialAndDefinition) {
  const CostParams params(0.5);
  std::mt19937_64 rng(2);
  auto u = random_field(rng, 150, 0, 1);
  u.values[3] = kInf;
  const auto ys = cloud(rng, 120, 0.5, 2);
  const auto a = lax_forward(u, 0.8, ys, params);
  const auto b = serial::lax_forward(u, 0.8, ys, params);
  EXPECT_EQ(a.values, b.values);
  for (std::size_t j = 0; j < ys.size(); ++j) {
    double m = kInf;
    for (std::size_t i = 0; i < u.carrier.size(); ++i) {
      m = std::min(m, add_for_inf(u.values[i], cost_t(0.8, u.carrier[i], ys[j], params)));
    }
    EXPECT_EQ(a.values[j], m);
  }
  const auto c = lax_backward(u, 0.8, ys, params);
  const auto d = serial::lax_backward(u, 0.8, ys, params);
  EXPECT_EQ(c.values, d.values);
}

TEST(LaxOleinik, MonotoneInData) {
  const CostParams params(0.5);
  std::mt19937_64 rng(3);
  const auto u = random_field(rng, 30, 0, 1);
  auto v = u;
  for (auto& x : v.values) x += 0.25;
  const auto ys = cloud(rng, 30, 1, 2);
  const auto fu = lax_forward(u, 1.0, ys, params), fv = lax_forward(v, 1.0, ys, params);
  for (std::size_t j = 0; j < ys.size(); ++j) EXPECT_LE(fu.values[j], fv.values[j]);
}

TEST(LaxOleinik, SemigroupInequalities) {
  const CostParams params(0.5);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = random_field(rng, 12, 0, 1);
    const auto ys = cloud(rng, 12, 1.5, 2.5);
    const auto zs = cloud(rng, 12, 0.5, 1.5);
    const auto back = lax_backward(lax_forward(u, 0.6, ys, params), 0.6, u.carrier, params);
    for (std::size_t k = 0; k < u.values.size(); ++k) EXPECT_LE(back.values[k], u.values[k] + 1e-14);
    const ValueField v{ys, std::vector<double>(ys.size(), 0.3), 0.0};
    const auto fwd = lax_forward(lax_backward(v, 0.6, u.carrier, params), 0.6, ys, params);
    for (std::size_t k = 0; k < ys.size(); ++k) EXPECT_GE(fwd.values[k], v.values[k] - 1e-14);
    const auto direct = lax_forward(u, 1.0, ys, params);
    const auto two = lax_forward(lax_forward(u, 0.4, zs, params), 0.6, ys, params);
    for (std::size_t k = 0; k < ys.size(); ++k) EXPECT_LE(direct.values[k], two.values[k] + 1e-14);
  }
}

TEST(DynamicalCoupling, PositionsAndValidation) {
  const auto mu = DiscreteMeasure::dirac(point_xt(0, 0));
  const auto nu = DiscreteMeasure::dirac(point_xt(1, 2));
  const DynamicalCoupling dyn(Coupling{mu, nu, {{0, 0, 1.0}}});
  EXPECT_EQ(dyn.position(0, 0.0), point_xt(0, 0));
  EXPECT_EQ(dyn.position(0, 0.5), point_xt(0.5, 1));
  EXPECT_EQ(dyn.position(0, 1.0), point_xt(1, 2));
  const auto bad = DiscreteMeasure::dirac(point_xt(5, 1));
  EXPECT_THROW(DynamicalCoupling(Coupling{mu, bad, {{0, 0, 1.0}}}), std::invalid_argument);
}

TEST(Interpolation, EndpointsAndCost) {
  const CostParams params(0.5);
  std::mt19937_64 rng(5);
  const auto mu = DiscreteMeasure::uniform(cloud(rng, 10, 0, 1));
  const auto nu = DiscreteMeasure::uniform(cloud(rng, 10, 2.5, 3.5));
  const auto r = solve_primal(build_cost_matrix(mu, nu, params), mu, nu);
  const DynamicalCoupling dyn(r.coupling);
  const auto full = displacement_interpolate(dyn, 0.0, 1.0);
  EXPECT_EQ(full.mu_s.points(), mu.points());
  EXPECT_EQ(full.mu_t.points(), nu.points());
  EXPECT_NEAR(coupling_cost(full.pi_st, params), r.primal_value, 1e-14);
  EXPECT_THROW(displacement_interpolate(dyn, 0.5, 0.5), std::invalid_argument);
  EXPECT_THROW(displacement_interpolate(dyn, -0.1, 0.5), std::invalid_argument);

  for (auto [s, t] : {std::pair{0.25, 0.75}, std::pair{0.0, 0.5}, std::pair{0.1, 1.0}}) {
    const auto in = displacement_interpolate(dyn, s, t);
    EXPECT_TRUE(check_marginals(in.pi_st).ok);
    // Time-(t − s) action of the induced plan.
    const double action = std::pow(t - s, 1.0 - params.p()) * coupling_cost(in.pi_st, params);
    EXPECT_NEAR(action, (t - s) * r.primal_value, 1e-12);
    const auto lp = solve_primal(build_cost_matrix(in.mu_s, in.mu_t, params), in.mu_s, in.mu_t);
    EXPECT_NEAR(lp.primal_value, coupling_cost(in.pi_st, params), 1e-9);
  }
}

TEST(Calibration, SolvedPairAndPerturbation) {
  const CostParams params(0.5);
  std::mt19937_64 rng(6);
  const auto mu = DiscreteMeasure::uniform(cloud(rng, 8, 0, 1));
  const auto nu = DiscreteMeasure::uniform(cloud(rng, 8, 2.5, 3.5));
  const auto r = solve_primal(build_cost_matrix(mu, nu, params), mu, nu);
  ValueField phi{mu.points(), r.duals->rows, 0.0}, psi{nu.points(), r.duals->cols, 1.0};
  auto rep = calibration_check(phi, psi, r.coupling, params);
  EXPECT_LE(rep.max_calibration_residual, 1e-8);
  EXPECT_LE(rep.max_subsolution_violation, 1e-12);
  psi.values[2] += 0.01;
  rep = calibration_check(phi, psi, r.coupling, params);
  EXPECT_NEAR(rep.max_subsolution_violation, 0.01, 1e-9);
  EXPECT_EQ(rep.violation_col, 2u);
}

TEST(Calibration, GeodesicIdentity) {
  const CostParams params(0.5);
  std::mt19937_64 rng(7);
  const auto mu = DiscreteMeasure::uniform(cloud(rng, 8, 0, 1));
  const auto nu = DiscreteMeasure::uniform(cloud(rng, 8, 2.5, 3.5));
  const auto r = solve_primal(build_cost_matrix(mu, nu, params), mu, nu);
  const ValueField phi{mu.points(), r.duals->rows, 0.0};
  const double times[] = {0.0, 0.2, 0.5, 0.9, 1.0};
  EXPECT_LE(geodesic_calibration_residual(phi, DynamicalCoupling(r.coupling), times, params), 1e-10);
}

// T̂_b T_a u(z) by brute force: exact inner infimum, outer supremum over a
// polar grid of w ∈ J⁺(z).
double sup_inf_brute(const ValueField& u, double a, double b, const SpacetimePoint& z,
                     const CostParams& params) {
  double best = -kInf;
  for (int i = 0; i <= 600; ++i) {
    const double tau = 3.0 * i / 600.0;
    for (int j = -200; j <= 200; ++j) {
      const double dx = tau * j / 200.0;
      const auto w = point_xt(z.x[0] + dx, z.t + tau);
      double inner = kInf;
      for (std::size_t k = 0; k < u.carrier.size(); ++k) {
        inner = std::min(inner, add_for_inf(u.values[k], cost_t(a, u.carrier[k], w, params)));
      }
      best = std::max(best, add_for_sup(inner, -cost_t(b, z, w, params)));
    }
  }
  return best;
}

TEST(SupInfConvolution, UpperBoundAndBruteForce) {
  const CostParams params(0.5);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uz(0, 1);
  for (int trial = 0; trial < 6; ++trial) {
    auto u = random_field(rng, 5, 0, 0.3);
    const auto z = point_xt(uz(rng), 1.0 + uz(rng));
    const double a = 1.0, b = 0.3;
    const double v = sup_inf_convolution(u, a, b, z, params);
    const double upper = lax_forward(u, a - b, std::vector<SpacetimePoint>{z}, params).values[0];
    EXPECT_LE(v, upper + 1e-12);
    const double brute = sup_inf_brute(u, a, b, z, params);
    EXPECT_GE(v, brute - 1e-9);
    EXPECT_LE(v, brute + 5e-3);
  }
}

TEST(SupInfConvolution, SingleSourceIsExact) {
  const CostParams params(0.5);
  const ValueField u{{point_xt(0, 0)}, {0.2}, 0.0};
  const auto z = point_xt(0.1, 1.0);
  EXPECT_NEAR(sup_inf_convolution(u, 1.0, 0.25, z, params),
              0.2 + cost_t(0.75, point_xt(0, 0), z, params), 1e-13);
  EXPECT_THROW(sup_inf_convolution(u, 0.2, 0.3, z, params), std::invalid_argument);
  EXPECT_THROW(sup_inf_convolution(u, 1.0, 0.0, z, params), std::invalid_argument);
}

TEST(RegularizedPair, ValidatesTimes) {
  const CostParams params(0.5);
  const ValueField u{{point_xt(0, 0)}, {0.0}, 0.0};
  const std::vector<SpacetimePoint> c{point_xt(0, 1)};
  EXPECT_THROW(regularized_pair(u, 0.5, 0.4, 0.1, c, c, params), std::invalid_argument);
  EXPECT_THROW(regularized_pair(u, 0.2, 0.8, 0.3, c, c, params), std::invalid_argument);
  EXPECT_THROW(regularized_pair(u, 0.2, 0.8, 0.0, c, c, params), std::invalid_argument);
  EXPECT_NO_THROW(regularized_pair(u, 0.2, 0.8, 0.2, c, c, params));
}

TEST(RegularizedPair, CalibratedOnInterpolation) {
  const CostParams params(0.5);
  std::vector<SpacetimePoint> xs;
  for (int k = 0; k < 20; ++k) xs.push_back(point_xt(-0.5 + k / 19.0, 0.0));
  const auto mu = DiscreteMeasure::uniform(xs);
  const DiscreteMeasure nu({point_xt(-1, 3), point_xt(1, 3)}, {0.5, 0.5});
  const auto r = solve_primal(build_cost_matrix(mu, nu, params), mu, nu);
  const ValueField phi{mu.points(), r.duals->rows, 0.0};
  const DynamicalCoupling dyn(r.coupling);
  const auto in = displacement_interpolate(dyn, 0.3, 0.8);
  const auto pair = regularized_pair(phi, 0.3, 0.8, 0.1, in.mu_s.points(), in.mu_t.points(), params);
  const auto rep = calibration_check(pair.phi_s, pair.psi_t, in.pi_st, params);
  EXPECT_LE(rep.max_calibration_residual, 1e-6);
  EXPECT_LE(rep.max_subsolution_violation, 1e-8);
  // The forward-then-backward pipeline agrees with the pair.
  const auto side = regularized_side(phi, 0.3, 0.1, pair.scale, in.mu_s.points(), params);
  EXPECT_EQ(side.values, pair.phi_s.values);
}

TEST(RegularizedPair, SmallTauApproachesForwardField) {
  const CostParams params(0.5);
  std::vector<SpacetimePoint> xs;
  for (int k = 0; k < 41; ++k) xs.push_back(point_xt(-0.5 + k / 40.0, 0.0));
  const ValueField phi{xs, std::vector<double>(xs.size(), 0.0), 0.0};
  const auto z = Grid2::covering(-0.05, 0.05, 0.7, 0.8, 0.025).points();
  const auto forward = lax_forward(phi, 0.25, z, params);
  double prev = kInf;
  for (double tau : {0.1, 0.01, 0.001}) {
    const auto reg = regularized_side(phi, 0.25, tau, 1.0, z, params);
    double diff = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) diff = std::max(diff, std::abs(reg.values[k] - forward.values[k]));
    EXPECT_LE(diff, prev + 1e-12);
    prev = diff;
  }
  EXPECT_LE(prev, 1e-3);
}

}  // namespace
}  // namespace lot
