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

#include "lorentz_ot/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

namespace lot {

// ---------------------------------------------------------------------------
// Reports.

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return !c.gating || c.passed; });
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Check& Report::expect_le(std::string name, std::string claim, double measured,
                         double threshold) {
  checks.push_back({std::move(name), std::move(claim), measured, "<=", threshold,
                    measured <= threshold, true, ""});
  return checks.back();
}

Check& Report::expect_ge(std::string name, std::string claim, double measured,
                         double threshold) {
  checks.push_back({std::move(name), std::move(claim), measured, ">=", threshold,
                    measured >= threshold, true, ""});
  return checks.back();
}

Check& Report::expect_true(std::string name, std::string claim, bool value) {
  checks.push_back({std::move(name), std::move(claim), value ? 1.0 : 0.0, "true", 1.0,
                    value, true, ""});
  return checks.back();
}

Check& Report::observe(std::string name, std::string claim, double measured,
                       std::string note) {
  checks.push_back({std::move(name), std::move(claim), measured, "observed", 0.0, true,
                    false, std::move(note)});
  return checks.back();
}

Json report_to_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json j{{"name", c.name},
           {"claim", c.claim},
           {"measured", extended_to_json(c.measured)},
           {"relation", c.relation}};
    if (c.relation != "true" && c.relation != "observed") {
      j["threshold"] = extended_to_json(c.threshold);
    }
    j["passed"] = c.passed;
    j["gating"] = c.gating;
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(j);
  }
  return Json{{"scenario", r.scenario},
              {"passed", r.passed()},
              {"parameters", r.parameters},
              {"checks", checks},
              {"values", r.values}};
}

void write_report(const Report& r, const std::string& dir, bool plots) {
  std::filesystem::create_directories(dir);
  write_text_file(dir + "/report.json", report_to_json(r).dump(2) + "\n");
  for (const auto& [name, text] : r.csv) write_text_file(dir + "/" + name, text);
  if (plots) {
    for (const auto& [name, text] : r.svg) write_text_file(dir + "/" + name, text);
  }
}

namespace {

Json config_json(const ScenarioConfig& cfg) {
  return Json{{"p", cfg.p}, {"seed", cfg.seed}};
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Minimum over all permutation couplings of an equal-weight square instance.
double brute_force_assignment(const CostMatrix& c) {
  const std::size_t n = c.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInf;
  do {
    double v = 0.0;
    for (std::size_t i = 0; i < n && v < kInf; ++i) v += c(i, perm[i]);
    best = std::min(best, v / static_cast<double>(n));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// North-west corner plan: a feasible vertex that ignores the costs.
Coupling north_west_corner(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  Coupling c{mu, nu, {}};
  std::vector<double> a = mu.weights(), b = nu.weights();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double m = std::min(a[i], b[j]);
    if (m > 1e-15) c.entries.push_back({i, j, m});
    a[i] -= m;
    b[j] -= m;
    if (a[i] <= 1e-15) {
      ++i;
    } else {
      ++j;
    }
  }
  return c;
}

std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> w(n);
  for (auto& v : w) v = uniform(rng, 0.2, 1.0);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= s;
  // Push the rounding residue into the largest weight.
  const double rest = 1.0 - std::accumulate(w.begin(), w.end(), 0.0);
  *std::max_element(w.begin(), w.end()) += rest;
  return w;
}

std::vector<SpacetimePoint> random_box(std::mt19937_64& rng, std::size_t n, double x_lo,
                                       double x_hi, double t_lo, double t_hi) {
  std::vector<SpacetimePoint> pts;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = uniform(rng, x_lo, x_hi);
    pts.push_back(point_xt(x, uniform(rng, t_lo, t_hi)));
  }
  return pts;
}

// Fill distance of a sample over the rectangle: the largest distance from a
// point of the support to its nearest sample.
double fill_distance(const DiscreteMeasure& m, const RoundedRectangleDensity& g) {
  constexpr int kAlong = 400, kAcross = 100;
  const double len = g.edge_length();
  double fill = 0.0;
#pragma omp parallel for reduction(max : fill) schedule(static)
  for (int ia = 0; ia <= kAlong; ++ia) {
    for (int ib = 0; ib <= kAcross; ++ib) {
      const SpacetimePoint q = g.at(len * ia / kAlong, g.thickness * ib / kAcross);
      if (!g.contains(q)) continue;
      double nn = kInf;
      for (const auto& x : m.points()) nn = std::min(nn, euclidean_distance(x, q));
      fill = std::max(fill, nn);
    }
  }
  return fill;
}

std::size_t nearest_index(const DiscreteMeasure& m, const SpacetimePoint& q) {
  std::size_t best = 0;
  double d = kInf;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double e = euclidean_distance(m.point(i), q);
    if (e < d) {
      d = e;
      best = i;
    }
  }
  return best;
}

std::vector<std::pair<SpacetimePoint, SpacetimePoint>> support_points(const Coupling& c) {
  std::vector<std::pair<SpacetimePoint, SpacetimePoint>> out;
  for (const auto& e : c.entries) out.emplace_back(c.source.point(e.i), c.target.point(e.j));
  return out;
}

std::string points_csv(const DiscreteMeasure& m) {
  std::ostringstream os;
  os << "x,t,weight\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << fmt("%.17g", m.point(i).x[0]) << ',' << fmt("%.17g", m.point(i).t) << ','
       << fmt("%.17g", m.weight(i)) << '\n';
  }
  return os.str();
}

std::string coupling_csv(const Coupling& c) {
  std::ostringstream os;
  os << "i,j,mass,x_source,t_source,x_target,t_target\n";
  for (const auto& e : c.entries) {
    const auto& a = c.source.point(e.i);
    const auto& b = c.target.point(e.j);
    os << e.i << ',' << e.j << ',' << fmt("%.17g", e.mass) << ',' << fmt("%.17g", a.x[0])
       << ',' << fmt("%.17g", a.t) << ',' << fmt("%.17g", b.x[0]) << ','
       << fmt("%.17g", b.t) << '\n';
  }
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Discontinuous c-convex function.

Report run_example_discontinuity(const ScenarioConfig& cfg) {
  Report r;
  r.scenario = "discontinuity";
  r.parameters = config_json(cfg);
  r.parameters["a"] = cfg.a;
  const CostParams params(cfg.p);
  const SpacetimePoint y1 = point_xt(2, 2), y0 = point_xt(-2, 2), x0 = point_xt(-1, -1);

  auto field = [&](double p, double a) {
    return ExplicitCConvex(AtomsSpec{{{y1, 0.0}, {y0, a}}}, CostParams(p));
  };
  const auto phi = field(cfg.p, cfg.a);

  const double at_x0 = phi(x0);
  r.values["phi_x0"] = extended_to_json(at_x0);
  r.expect_true("phi_x0_zero", "phi(x0) = -c(x0,y1) = 0 at the corner point", at_x0 == 0.0);

  const double d00 = lorentz_distance(x0, y0);
  const double expected_limit = cfg.a + std::pow(8.0, cfg.p / 2.0);
  r.values["d_x0_y0"] = d00;
  r.values["limit_expected"] = expected_limit;
  r.values["limit_expected_from_distance"] = cfg.a + std::pow(d00, cfg.p);

  std::ostringstream seq;
  seq << "delta,phi\n";
  double limit_value = 0.0;
  bool outside_y1 = true;
  for (int k = 1; k <= 11; ++k) {
    const double delta = std::pow(10.0, -k);
    const SpacetimePoint x = point_xt(-1.0, -1.0 + delta);
    outside_y1 = outside_y1 && !is_causal_future(classify(x, y1)) &&
                 is_timelike_future(classify(x, y0));
    limit_value = phi(x);
    seq << fmt("%.1e", delta) << ',' << fmt("%.17g", limit_value) << '\n';
  }
  r.csv.emplace_back("one_sided_limit.csv", seq.str());
  r.values["limit_measured"] = limit_value;
  r.expect_true("approach_from_outside_past_of_y1",
                "approach points lie in I^-(y0) and outside J^-(y1)", outside_y1);
  r.expect_le("one_sided_limit",
              "phi(x0 + delta e_t) -> a + d(x0,y0)^p = a + 8^(p/2) as delta -> 0",
              std::abs(limit_value - expected_limit), 1e-10);

  Json gaps = Json::array();
  double worst_gap_error = 0.0;
  for (double p : {0.3, 0.5, 0.7}) {
    const auto f = field(p, cfg.a);
    const double gap = f(x0) - f(point_xt(-1.0, -1.0 + 1e-11));
    const double predicted = std::abs(cfg.a) - std::pow(d00, p);
    worst_gap_error = std::max(worst_gap_error, std::abs(gap - predicted));
    gaps.push_back(Json{{"p", p}, {"gap", gap}, {"predicted", predicted}});
  }
  r.values["gap_by_p"] = gaps;
  r.expect_le("gap_matches_distance", "jump at x0 equals |a| - d(x0,y0)^p for p in {0.3,0.5,0.7}",
              worst_gap_error, 1e-10);

  Json study = Json::array();
  std::vector<double> crossing;
  double smooth_worst = 0.0;
  GridField last_cross;
  for (double h : {0.04, 0.02, 0.01}) {
    const auto smooth = sample_on_grid(Grid2::covering(0.3, 0.7, -1.2, -0.8, h),
                                       [&](const SpacetimePoint& x) { return phi(x); });
    const auto cross = sample_on_grid(Grid2::covering(-1.2, -0.8, -1.2, -0.8, h),
                                      [&](const SpacetimePoint& x) { return phi(x); });
    const double ks = semiconvexity_constant(smooth);
    const double kc = semiconvexity_constant(cross);
    smooth_worst = std::max(smooth_worst, ks);
    crossing.push_back(kc);
    study.push_back(Json{{"h", h}, {"smooth_patch", ks}, {"crossing_patch", kc}});
    last_cross = cross;
  }
  r.values["semiconvexity"] = study;
  r.expect_le("smooth_patch_bounded",
              "semiconvexity constant stays bounded on a patch away from the null lines",
              smooth_worst, 10.0);
  double min_ratio = kInf;
  for (std::size_t k = 1; k < crossing.size(); ++k) {
    min_ratio = std::min(min_ratio, crossing[k] / crossing[k - 1]);
  }
  r.expect_ge("crossing_patch_blows_up",
              "semiconvexity constant at least doubles per halving on a patch through x0",
              min_ratio, 2.0);

  SvgPlot plot(-1.2, -0.8, -1.2, -0.8);
  plot.title("phi near x0 (crossing patch, h = 0.01)");
  plot.heatmap(last_cross);
  plot.line(-1.2, -1.2, -0.8, -0.8, "red", 1.0, true);
  plot.dot(-1, -1, 3, "blue");
  r.svg.emplace_back("crossing_patch.svg", plot.str());
  r.csv.emplace_back("crossing_patch.csv", grid_field_csv(last_cross));
  return r;
}

// ---------------------------------------------------------------------------
// Unbounded c-subdifferential.

Report run_example_unbounded_subdiff(const ScenarioConfig& cfg) {
  Report r;
  r.scenario = "unbounded-subdiff";
  r.parameters = config_json(cfg);
  const CostParams params(cfg.p);
  const ExplicitCConvex phi(HyperbolaSpec{}, params);

  const std::vector<double> abscissae{1.0, 0.5, 0.1, 0.05, 0.02};
  r.parameters["x1"] = abscissae;
  Json rows = Json::array();
  double worst_slack = 0.0;
  bool all_members = true;
  std::vector<double> norms;
  std::ostringstream csv;
  csv << "x1,phi,argmax_y1,slack,norm\n";
  for (double x1 : abscissae) {
    const SpacetimePoint x = point_xt(x1, 0.0);
    const SpacetimePoint y = ExplicitCConvex::hyperbola_point(x1);
    const double phi_x = phi(x);
    PotentialField psi{{y}, {ExplicitCConvex::hyperbola_psi(x1, params)}, Provenance::kExplicit, {}};
    const double slack = subdifferential_slacks(phi_x, x, psi, params)[0];
    const auto set = c_subdifferential(phi_x, x, psi, params, 1e-6);
    all_members = all_members && set.entries.size() == 1;
    worst_slack = std::max(worst_slack, std::abs(slack));
    const double norm = std::hypot(y.x[0], y.t);
    norms.push_back(norm);
    const double arg = phi.argmax_y1(x).value_or(std::nan(""));
    rows.push_back(Json{{"x1", x1}, {"phi", phi_x}, {"argmax_y1", arg}, {"slack", slack},
                        {"norm", norm}});
    csv << fmt("%.17g", x1) << ',' << fmt("%.17g", phi_x) << ',' << fmt("%.17g", arg) << ','
        << fmt("%.17g", slack) << ',' << fmt("%.17g", norm) << '\n';
  }
  r.values["rows"] = rows;
  r.csv.emplace_back("subdifferential.csv", csv.str());
  r.expect_le("hyperbola_point_in_subdifferential",
              "(x1, 1/x1) lies in the c-subdifferential at (x1, 0)", worst_slack, 1e-6);
  r.expect_true("membership_reported", "c_subdifferential lists the hyperbola point",
                all_members);
  bool increasing = true;
  for (std::size_t k = 1; k < norms.size(); ++k) increasing = increasing && norms[k] > norms[k - 1];
  r.expect_true("norms_strictly_increase",
                "subdifferential points escape to infinity as x1 decreases to 0", increasing);

  const auto cloud = sample(UniformBall{point_xt(0, 0), 0.25}, 100, cfg.seed, SampleMode::kRandom);
  double worst_excess = -kInf;
  bool finite = true;
  for (const auto& x : cloud.points()) {
    const double v = phi(x);
    finite = finite && is_finite(v);
    worst_excess = std::max(worst_excess, v - std::pow(std::abs(x.t), cfg.p));
  }
  r.values["bound_max_excess"] = extended_to_json(worst_excess);
  r.expect_true("finite_near_origin", "phi is real-valued on a neighbourhood of 0", finite);
  r.expect_le("upper_bound", "phi(x) <= |x_2|^p on 100 sampled points near 0", worst_excess,
              1e-8);

  SvgPlot plot(0, 2.5, -0.5, 10);
  plot.title("hyperbola and subdifferential points");
  std::vector<std::pair<double, double>> curve;
  for (double y1 = 0.1; y1 <= 2.5; y1 += 0.01) curve.emplace_back(y1, 1.0 / y1);
  plot.polyline(curve, "black");
  for (double x1 : abscissae) {
    if (1.0 / x1 > 10) continue;
    plot.line(x1, 0, x1, 1.0 / x1, "blue", 1.0, true);
    plot.dot(x1, 0, 3, "red");
  }
  r.svg.emplace_back("hyperbola.svg", plot.str());
  return r;
}

// ---------------------------------------------------------------------------
// Optimal coupling touching the light cone.

Report run_example_lightcone_coupling(const ScenarioConfig& cfg) {
  Report r;
  r.scenario = "lightcone-coupling";
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(cfg.thickness > 0.0)) throw std::invalid_argument("thickness must be positive");
  if (!(cfg.heavy_mass > 0.5 && cfg.heavy_mass < 1.0)) {
    throw std::invalid_argument("heavy mass must lie in (1/2, 1)");
  }
  const std::size_t n = cfg.n.value_or(400);
  r.parameters = config_json(cfg);
  r.parameters["n"] = n;
  r.parameters["eps"] = cfg.eps;
  r.parameters["thickness"] = cfg.thickness;
  r.parameters["heavy_mass"] = cfg.heavy_mass;
  const CostParams params(cfg.p);

  RoundedRectangleDensity g;
  g.top_left = point_xt(-cfg.eps, cfg.eps);
  g.thickness = cfg.thickness;
  g.heavy_mass = cfg.heavy_mass;
  const SpacetimePoint x0 = point_xt(0, 0), y0 = point_xt(-1, 1), x1 = point_xt(3, -3),
                       y1 = point_xt(3, 4);

  const double block = heavy_block_mass(g);
  const auto mu = sample(g, n, cfg.seed, SampleMode::kGrid);
  const DiscreteMeasure nu({y0, y1}, {0.5, 0.5});
  std::size_t in_block = 0;
  for (const auto& x : mu.points()) in_block += g.in_heavy_block(x) ? 1 : 0;
  const double sampled_block = static_cast<double>(in_block) / static_cast<double>(n);
  r.values["heavy_block_mass"] = block;
  r.values["heavy_block_sampled"] = sampled_block;
  r.expect_ge("heavy_block_mass", "the dark block carries more than half of the mass (density)",
              block, 0.55);
  r.expect_ge("heavy_block_sampled", "the dark block carries more than half of the mass (sample)",
              sampled_block, 0.55);

  const auto matrix = build_cost_matrix(mu, nu, params);
  const auto result = solve_primal(matrix, mu, nu);
  r.expect_true("optimal", "the discrete problem has an optimal causal coupling",
                result.status == TransportStatus::kOptimal);
  if (result.status != TransportStatus::kOptimal) return r;
  r.values["primal_value"] = result.primal_value;
  const auto marg = check_marginals(result.coupling);
  r.expect_true("marginals", "coupling marginals equal (mu, nu)", marg.ok);
  r.expect_le("basic_support", "support is a basic solution (<= |mu| + |nu| - 1 pairs)",
              static_cast<double>(result.coupling.entries.size()),
              static_cast<double>(n + 1));
  const auto support = support_of(result.coupling);
  const auto mono = check_cyclical_monotonicity(support, matrix);
  r.expect_true("support_monotone", "optimal support is c-cyclically monotone", mono.feasible);
  const double gap = dual_gap(result.duals->rows, result.duals->cols, result, matrix);
  r.expect_le("dual_gap", "solver potentials close the duality gap", std::abs(gap), cfg.tol_gap);

  const auto timelike = strictly_timelike_feasible(mu, nu);
  r.expect_true("strictly_timelike_feasible", "a coupling supported in I+ exists",
                timelike.feasible);

  const double gap_mu = fill_distance(mu, g);
  const double eps_cone = 2.0 * std::pow(gap_mu, cfg.p);
  double best_d = kInf;
  std::size_t best_i = 0;
  for (const auto& e : result.coupling.entries) {
    if (e.j != 0) continue;
    const double d = lorentz_distance(mu.point(e.i), y0);
    if (d < best_d) {
      best_d = d;
      best_i = e.i;
    }
  }
  const double from_x0 = euclidean_distance(mu.point(best_i), x0);
  r.values["fill_distance"] = gap_mu;
  r.values["eps_cone"] = eps_cone;
  r.values["closest_to_cone"] = Json{{"point", point_to_json(mu.point(best_i))},
                                     {"d_to_y0", best_d},
                                     {"distance_to_x0", from_x0}};
  r.expect_le("touches_null_cone", "mass near x0 is sent to y0 along an almost null direction",
              best_d, eps_cone);
  r.expect_le("touch_point_near_x0", "the almost null pair starts within two fill distances of x0",
              from_x0, 2.0 * gap_mu);

  // The exchange argument with computed distances.
  const double c01 = cost(x0, y1, params), c10 = cost(x1, y0, params);
  const double c00 = cost(x0, y0, params), c11 = cost(x1, y1, params);
  r.values["c_x0_y1"] = c01;
  r.values["c_x1_y0"] = c10;
  r.values["c_x0_y0"] = c00;
  r.values["c_x1_y1_computed"] = c11;
  r.values["c_x1_y1_literal"] = -std::pow(4.0, cfg.p);
  r.expect_le("c_x0_y1", "c(x0,y1) = -7^(p/2)", std::abs(c01 + std::pow(7.0, cfg.p / 2.0)),
              1e-12);
  r.expect_true("x1_y0_null", "(x1,y0) is a null pair with zero cost",
                classify(x1, y0) == CausalClass::kNullFuture && c10 == 0.0);
  r.expect_ge("exchange_inequality_fails",
              "c(x0,y1) + c(x1,y0) - c(x0,y0) - c(x1,y1) > 0 with computed distances",
              c01 + c10 - c00 - c11, 1e-9);
  r.observe("literal_value_also_violates",
            "c(x0,y1) + c(x1,y0) - c(x0,y0) + 4^p (the other reading of c(x1,y1))",
            c01 + c10 - c00 + std::pow(4.0, cfg.p),
            "positive under both readings of c(x1,y1)");

  // x': the heavy-block sample whose exchange with (x0,y1) gains the most.
  std::size_t near_x1 = 0;
  double best_delta = kInf;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!g.in_heavy_block(mu.point(i))) continue;
    const double delta = c00 + cost(mu.point(i), y1, params) - c01 - cost(mu.point(i), y0, params);
    if (delta < best_delta) {
      best_delta = delta;
      near_x1 = i;
    }
  }
  const SpacetimePoint xp = mu.point(near_x1);
  const double near_d = lorentz_distance(xp, y0);
  const DiscreteMeasure pair_src({x0, xp}, {0.5, 0.5});
  const auto pair_matrix = build_cost_matrix(pair_src, nu, params);
  const std::vector<SupportPair> hypothetical{{0, 1}, {1, 0}};
  const auto cert = check_cyclical_monotonicity(hypothetical, pair_matrix);
  r.values["x_prime"] = point_to_json(xp);
  r.values["x_prime_d_to_y0"] = near_d;
  r.values["x_prime_distance_to_x1"] = euclidean_distance(xp, x1);
  r.values["exchange_cycle_delta"] = cert.cycle_delta ? Json(*cert.cycle_delta) : Json(nullptr);
  r.expect_true("hypothetical_pairs_not_monotone",
                "{(x0,y1),(x',y0)} with x' in the heavy block contains a negative cycle", !cert.feasible);

  // Away from the cone the margin is infinite: no target lies within d <= 0.1.
  const std::size_t bulk = nearest_index(mu, g.at(g.edge_length() / 2, g.thickness / 2));
  const ChainPotential phi(support_points(result.coupling), 0, params);
  PotentialField psi{nu.points(), {}, Provenance::kCTransform, {}};
  {
    PotentialField phi_field{mu.points(), {}, Provenance::kChainBuilt, 0};
    for (const auto& x : mu.points()) phi_field.values.push_back(phi(x));
    psi = c_transform(phi_field, nu.points(), params);
  }
  const double margin = lightcone_margin(phi(mu.point(bulk)), mu.point(bulk), psi, 0.1, params);
  r.expect_ge("bulk_margin_positive", "a bulk source point keeps a positive light-cone margin",
              margin, 0.0);

  r.csv.emplace_back("mu.csv", points_csv(mu));
  r.csv.emplace_back("coupling.csv", coupling_csv(result.coupling));
  SvgPlot plot(-1.5, 4, -4.5, 4.5, 560, 640);
  plot.title("optimal coupling: grey to y0, blue to y1");
  for (const auto& e : result.coupling.entries) {
    const auto& x = mu.point(e.i);
    plot.dot(x.x[0], x.t, 1.6, e.j == 0 ? "#777" : "#36c");
  }
  plot.line(-1.5, 1.5, 4, -4, "red", 1.0, true);
  plot.dot(-1, 1, 4, "black");
  plot.dot(3, 4, 4, "black");
  plot.label(-1, 1.2, "y0");
  plot.label(3, 4.2, "y1");
  plot.dot(0, 0, 3, "red");
  plot.label(0.1, 0.1, "x0");
  r.svg.emplace_back("coupling.svg", plot.str());
  return r;
}

// ---------------------------------------------------------------------------
// Causal compactness counterexample.

namespace {

SpacetimePoint figure_map(const SpacetimePoint& p) {
  const double x = p.x[0];
  if (x <= -1.0) return point_xt(x - 1.0, 1.0);
  if (x < 0.0) return point_xt(x + 1.0 / x, -1.0 / x);
  return point_xt(x, 1.0);
}

}  // namespace

Report run_appendixB_causal_compactness(const ScenarioConfig& cfg) {
  Report r;
  r.scenario = "appendixB-causal-compactness";
  const std::size_t n = cfg.n.value_or(64);
  r.parameters = config_json(cfg);
  r.parameters["n"] = n;
  r.parameters["anchor"] = cfg.anchor;
  if (cfg.anchor != "left" && cfg.anchor != "right") {
    throw std::invalid_argument("anchor must be 'left' or 'right'");
  }
  const CostParams params(cfg.p);
  const auto mu = sample(UniformSegment{point_xt(-4, 0), point_xt(4, 0)}, n, cfg.seed);
  const auto nu = pushforward(mu, figure_map);

  Coupling drawn{mu, nu, {}};
  for (std::size_t i = 0; i < mu.size(); ++i) {
    drawn.entries.push_back({i, nearest_index(nu, figure_map(mu.point(i))), mu.weight(i)});
  }
  r.expect_true("drawn_coupling_causal", "the drawn coupling (id, T) is causal",
                is_causal(drawn));
  std::size_t null_entries = 0;
  for (const auto& e : drawn.entries) {
    null_entries += classify(mu.point(e.i), nu.point(e.j)) == CausalClass::kNullFuture ? 1 : 0;
  }
  r.observe("drawn_coupling_strictly_timelike",
            "the drawn coupling is supported in I+ (1 = yes)",
            is_strictly_timelike(drawn) ? 1.0 : 0.0,
            "the branches x < 0 move along null directions, so the drawn coupling lies "
            "on the boundary of J+");
  r.values["drawn_null_entries"] = null_entries;
  const auto causal = causal_feasible(mu, nu);
  r.expect_true("causally_related", "a causal coupling between mu and nu exists",
                causal.feasible);
  const auto timelike = strictly_timelike_feasible(mu, nu);
  r.observe("strictly_timelike_feasible", "some coupling of the discretised pair lies in I+",
            timelike.feasible ? 1.0 : 0.0, "flow value " + fmt("%.17g", timelike.flow_value));

  const auto matrix = build_cost_matrix(mu, nu, params);
  const auto result = solve_primal(matrix, mu, nu);
  r.expect_true("optimal", "the discrete problem has an optimal coupling",
                result.status == TransportStatus::kOptimal);
  if (result.status != TransportStatus::kOptimal) return r;
  const auto support = support_of(result.coupling);
  bool sides_kept = true;
  for (const auto& s : support) {
    const bool left_src = mu.point(s.row).x[0] < 0.0;
    const bool left_dst = nu.point(s.col).x[0] < 0.0;
    sides_kept = sides_kept && left_src == left_dst;
  }
  r.expect_true("sides_not_mixed", "the optimal coupling keeps left with left and right with right",
                sides_kept);

  // Left: the left-branch pair closest to the origin; every left chain moves
  // leftwards from there. Right: the rightmost pair.
  std::optional<std::size_t> anchor_opt;
  for (std::size_t k = 0; k < support.size(); ++k) {
    const double x = mu.point(support[k].row).x[0];
    if (cfg.anchor == "left" && x >= 0.0) continue;
    if (!anchor_opt || x > mu.point(support[*anchor_opt].row).x[0]) anchor_opt = k;
  }
  if (!anchor_opt) throw std::runtime_error("no support pair on the requested branch");
  const std::size_t anchor = *anchor_opt;
  r.values["anchor_source"] = point_to_json(mu.point(support[anchor].row));

  std::vector<SpacetimePoint> left, right;
  for (const auto& x : mu.points()) (x.x[0] < 0.0 ? left : right).push_back(x);
  for (double x = 0.0; x <= 4.0; x += 1.0) right.push_back(point_xt(x, 0.0));
  const auto on_left = rockafellar_potential(support, mu, nu, anchor, left, params);
  const auto on_right = rockafellar_potential(support, mu, nu, anchor, right, params);
  const auto count = [](const PotentialField& f, bool want_finite) {
    return static_cast<double>(std::count_if(f.values.begin(), f.values.end(), [&](double v) {
      return is_finite(v) == want_finite;
    }));
  };
  r.values["left_finite"] = count(on_left, true);
  r.values["left_minus_inf"] = count(on_left, false);
  r.values["right_finite"] = count(on_right, true);
  r.values["right_minus_inf"] = count(on_right, false);
  if (cfg.anchor == "left") {
    r.expect_true("right_side_unreachable", "phi(x,0) = -inf for every query x >= 0",
                  count(on_right, true) == 0.0);
    r.expect_true("left_side_finite", "phi is finite on the left branch",
                  count(on_left, false) == 0.0);
  } else {
    r.expect_true("right_side_finite", "phi is finite on the right branch",
                  count(on_right, false) == 0.0);
    r.observe("left_side_minus_inf", "number of left-branch points where phi = -inf",
              count(on_left, false),
              "right-hand targets (x,1) with x < 1 are causally reachable from left sources "
              "with x > -1, so chains can cross to the left");
  }

  std::ostringstream csv;
  csv << "x,t,phi\n";
  for (const auto* f : {&on_left, &on_right}) {
    for (std::size_t k = 0; k < f->domain.size(); ++k) {
      csv << fmt("%.17g", f->domain[k].x[0]) << ',' << fmt("%.17g", f->domain[k].t) << ','
          << extended_to_string(f->values[k]) << '\n';
    }
  }
  r.csv.emplace_back("potential.csv", csv.str());
  r.csv.emplace_back("coupling.csv", coupling_csv(result.coupling));

  SvgPlot plot(-20, 5, -0.5, 17, 720, 480);
  plot.title("T: black arrows; optimal support: blue");
  for (const auto& e : drawn.entries) {
    const auto& a = mu.point(e.i);
    const auto& b = nu.point(e.j);
    plot.line(a.x[0], a.t, b.x[0], b.t, "black", 0.6);
  }
  for (const auto& s : support) {
    const auto& a = mu.point(s.row);
    const auto& b = nu.point(s.col);
    plot.line(a.x[0], a.t, b.x[0], b.t, "#36c", 0.6, true);
  }
  r.svg.emplace_back("figure.svg", plot.str());
  return r;
}

// ---------------------------------------------------------------------------
// Duality battery.

Report run_strong_duality_battery(const ScenarioConfig& cfg) {
  Report r;
  r.scenario = "duality-battery";
  r.parameters = config_json(cfg);
  r.parameters["trials"] = cfg.trials;
  r.parameters["tol_gap"] = cfg.tol_gap;
  const CostParams params(cfg.p);
  std::mt19937_64 rng(cfg.seed);

  double worst_gap = 0.0, worst_negative_gap = 0.0, worst_brute = 0.0;
  double worst_residual = 0.0, worst_subsolution = -kInf, worst_chain_gap = 0.0;
  double worst_marginal = 0.0;
  std::size_t equivalence_failures = 0, basic_failures = 0, brute_trials = 0;
  std::size_t nonoptimal_plans = 0, status_failures = 0;

  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    const bool square = trial % 2 == 0;
    std::size_t n, m;
    if (square) {
      n = m = 1 + static_cast<std::size_t>(rng() % 8);
    } else {
      n = 1 + static_cast<std::size_t>(rng() % 12);
      m = 1 + static_cast<std::size_t>(rng() % 12);
    }
    const auto xs = random_box(rng, n, 0.0, 1.0, 0.0, 1.0);
    const auto ys = random_box(rng, m, 0.0, 1.0, 2.5, 3.5);
    const DiscreteMeasure mu = square ? DiscreteMeasure::uniform(xs)
                                      : DiscreteMeasure(xs, random_weights(rng, n));
    const DiscreteMeasure nu = square ? DiscreteMeasure::uniform(ys)
                                      : DiscreteMeasure(ys, random_weights(rng, m));
    const auto matrix = build_cost_matrix(mu, nu, params);
    const auto res = solve_primal(matrix, mu, nu);
    if (res.status != TransportStatus::kOptimal) {
      ++status_failures;
      continue;
    }
    const auto marg = check_marginals(res.coupling);
    worst_marginal = std::max({worst_marginal, marg.max_row_error, marg.max_col_error});
    if (res.coupling.entries.size() > n + m - 1) ++basic_failures;

    const double gap = dual_gap(res.duals->rows, res.duals->cols, res, matrix);
    worst_gap = std::max(worst_gap, gap);
    worst_negative_gap = std::min(worst_negative_gap, gap);

    if (square) {
      ++brute_trials;
      worst_brute = std::max(worst_brute, std::abs(res.primal_value - brute_force_assignment(matrix)));
    }

    // Optimality and monotonicity agree: on the solver plan, and on a plan
    // that ignores the costs (a random permutation or the north-west corner).
    const auto support = support_of(res.coupling);
    if (!check_cyclical_monotonicity(support, matrix).feasible) ++equivalence_failures;
    Coupling other;
    if (square) {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      other = Coupling{mu, nu, {}};
      for (std::size_t i = 0; i < n; ++i) other.entries.push_back({i, perm[i], 1.0 / static_cast<double>(n)});
    } else {
      other = north_west_corner(mu, nu);
    }
    double other_value = 0.0;
    for (const auto& e : other.entries) other_value += e.mass * matrix(e.i, e.j);
    const double slack = 1e-9 * static_cast<double>(other.entries.size());
    const bool other_optimal = other_value <= res.primal_value + slack;
    const bool other_monotone = check_cyclical_monotonicity(support_of(other), matrix).feasible;
    if (!other_optimal) ++nonoptimal_plans;
    if (other_optimal != other_monotone) ++equivalence_failures;

    // Chain-built potential and its c-transform.
    PotentialField phi = rockafellar_potential(support, mu, nu, 0, mu.points(), params);
    const PotentialField psi = c_transform(phi, nu.points(), params);
    for (const auto& e : res.coupling.entries) {
      worst_residual = std::max(
          worst_residual, std::abs(psi.values[e.j] - phi.values[e.i] - matrix(e.i, e.j)));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        worst_subsolution =
            std::max(worst_subsolution, psi.values[j] - phi.values[i] - matrix(i, j));
      }
    }
    worst_chain_gap = std::max(worst_chain_gap,
                               std::abs(dual_gap(phi.values, psi.values, res, matrix, 1e-8)));
  }

  // Near-null instances: targets placed just inside the cone of a matched source.
  double worst_near_null_gap = 0.0;
  std::size_t near_null_failures = 0;
  const std::size_t near_null_trials = std::max<std::size_t>(1, cfg.trials / 10);
  for (std::size_t trial = 0; trial < near_null_trials; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 7);
    const auto xs = random_box(rng, n, 0.0, 1.0, 0.0, 1.0);
    std::vector<SpacetimePoint> ys;
    for (const auto& x : xs) {
      const double v = uniform(rng, -1.0, 1.0);
      const double eta = std::pow(10.0, uniform(rng, -9.0, -6.0));
      ys.push_back(point_xt(x.x[0] + v, x.t + std::abs(v) + eta));
    }
    const auto mu = DiscreteMeasure::uniform(xs);
    const auto nu = DiscreteMeasure::uniform(ys);
    const auto matrix = build_cost_matrix(mu, nu, params);
    const auto res = solve_primal(matrix, mu, nu);
    if (res.status != TransportStatus::kOptimal) {
      ++near_null_failures;
      continue;
    }
    worst_near_null_gap = std::max(
        worst_near_null_gap, std::abs(dual_gap(res.duals->rows, res.duals->cols, res, matrix, 1e-8)));
    if (!check_cyclical_monotonicity(support_of(res.coupling), matrix).feasible) ++near_null_failures;
    if (std::abs(res.primal_value - brute_force_assignment(matrix)) > 1e-10) ++near_null_failures;
  }

  // One-point instance.
  const auto one_mu = DiscreteMeasure::dirac(point_xt(0, 0));
  const auto one_nu = DiscreteMeasure::dirac(point_xt(0.5, 2));
  const auto one_m = build_cost_matrix(one_mu, one_nu, params);
  const auto one = solve_primal(one_m, one_mu, one_nu);
  const bool one_ok = one.status == TransportStatus::kOptimal &&
                      one.coupling.entries.size() == 1 &&
                      std::abs(one.primal_value - one_m(0, 0)) <= 1e-15;

  r.values["brute_force_trials"] = brute_trials;
  r.values["nonoptimal_reference_plans"] = nonoptimal_plans;
  r.values["near_null_trials"] = near_null_trials;
  r.expect_true("all_optimal", "every strictly timelike instance is solved to optimality",
                status_failures == 0);
  r.expect_le("marginals", "solver plans satisfy the marginal constraints", worst_marginal, 1e-10);
  r.expect_true("basic_support", "solver plans are basic (<= n + m - 1 pairs)", basic_failures == 0);
  r.expect_le("dual_gap", "solver potentials close the duality gap", worst_gap, cfg.tol_gap);
  r.expect_ge("dual_gap_lower", "weak duality: the gap is never negative", worst_negative_gap, -1e-9);
  r.expect_le("lp_matches_brute_force", "LP value equals the best permutation (n <= 8)",
              worst_brute, 1e-10);
  r.expect_le("optimal_iff_monotone", "a plan is optimal exactly when its support has no negative cycle",
              static_cast<double>(equivalence_failures), 0.0);
  r.expect_le("chain_calibration", "chain potential and its c-transform satisfy psi - phi = c on the support",
              worst_residual, 1e-8);
  r.expect_le("chain_subsolution", "psi - phi <= c on all pairs", worst_subsolution, 1e-8);
  r.expect_le("chain_dual_gap", "the chain pair is dual optimal", worst_chain_gap, cfg.tol_gap);
  r.expect_le("near_null_gap", "near-null instances still close the gap", worst_near_null_gap, 1e-8);
  r.expect_le("near_null_failures", "near-null instances are optimal, monotone and match brute force",
              static_cast<double>(near_null_failures), 0.0);
  r.expect_true("one_point", "a one-point instance is trivially optimal", one_ok);
  return r;
}

// ---------------------------------------------------------------------------
// Displacement interpolation and C^{1,1} regularisation.

namespace {

struct C11Instance {
  DiscreteMeasure mu, nu;
  TransportResult result;
  ValueField phi;
};

C11Instance c11_instance(const std::vector<SpacetimePoint>& sources,
                         const DiscreteMeasure& nu, const CostParams& params) {
  C11Instance inst{DiscreteMeasure::uniform(sources), nu, {}, {}};
  const auto matrix = build_cost_matrix(inst.mu, nu, params);
  inst.result = solve_primal(matrix, inst.mu, nu);
  if (inst.result.status != TransportStatus::kOptimal) {
    throw std::runtime_error("interpolation instance is infeasible");
  }
  const auto phi = rockafellar_potential(support_of(inst.result.coupling), inst.mu, nu, 0,
                                         inst.mu.points(), params);
  inst.phi = ValueField{inst.mu.points(), phi.values, 0.0};
  return inst;
}

std::vector<SpacetimePoint> row_of_sources(std::size_t count) {
  std::vector<SpacetimePoint> out;
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(point_xt(-0.45 + 0.9 * static_cast<double>(k) / static_cast<double>(count - 1), 0.0));
  }
  return out;
}

}  // namespace

Report run_c11_interpolation(const ScenarioConfig& cfg) {
  Report r;
  r.scenario = "c11-interpolation";
  const double s = cfg.s, t = cfg.t, tau = cfg.tau.value_or((cfg.t - cfg.s) / 4.0);
  r.parameters = config_json(cfg);
  r.parameters["s"] = s;
  r.parameters["t"] = t;
  r.parameters["tau"] = tau;
  const CostParams params(cfg.p);
  constexpr double kBound = 5.0;
  r.parameters["constant_bound"] = kBound;

  const DiscreteMeasure nu({point_xt(-1, 3), point_xt(1, 3)}, {0.5, 0.5});
  const auto inst = c11_instance(row_of_sources(10), nu, params);
  const DynamicalCoupling dyn(inst.result.coupling);
  const auto interp = displacement_interpolate(dyn, s, t);

  const double c01 = inst.result.primal_value;
  const double plain = coupling_cost(interp.pi_st, params);
  const double action = std::pow(t - s, 1.0 - params.p()) * plain;
  r.values["C_mu0_mu1"] = c01;
  r.values["C_pi_st_plain_cost"] = plain;
  r.values["C_pi_st_action"] = action;
  r.expect_le("interpolation_value",
              "C_{t-s}(mu_s, mu_t) = (t - s) C(mu_0, mu_1) along the interpolation",
              std::abs(action - (t - s) * c01), 1e-9);
  const auto lp_matrix = build_cost_matrix(interp.mu_s, interp.mu_t, params);
  const auto lp = solve_primal(lp_matrix, interp.mu_s, interp.mu_t);
  r.expect_le("interpolation_lp", "the induced coupling pi_{s,t} is optimal (LP confirmation)",
              std::abs(lp.primal_value - plain), 1e-9);

  const double calibration_times[] = {0.0, s, t, 1.0};
  const double geo = geodesic_calibration_residual(inst.phi, dyn, calibration_times, params);
  r.expect_le("geodesic_calibration", "T_t phi(g(t)) = T_s phi(g(s)) + c_{t-s}(g(s), g(t)) along optimal geodesics",
              geo, 1e-10);

  const auto pair = regularized_pair(inst.phi, s, t, tau, interp.mu_s.points(),
                                     interp.mu_t.points(), params);
  const auto cal = calibration_check(pair.phi_s, pair.psi_t, interp.pi_st, params);
  r.values["calibration_residual"] = cal.max_calibration_residual;
  r.values["subsolution_violation"] = extended_to_json(cal.max_subsolution_violation);
  r.expect_le("regularized_calibration", "the regularised pair is calibrated on pi_{s,t}",
              cal.max_calibration_residual, 1e-6);
  r.expect_le("regularized_subsolution", "the regularised pair is a c-subsolution",
              cal.max_subsolution_violation, 1e-8);

  // Patch between two neighbouring interpolation points (a kink of T_s phi).
  const SpacetimePoint za = dyn.position(6, s), zb = dyn.position(7, s);
  const double cx = 0.5 * (za.x[0] + zb.x[0]), ct = 0.5 * (za.t + zb.t);
  r.values["patch_center"] = Json::array({ct, cx});
  Json study = Json::array();
  double reg_convex = 0.0, reg_concave = 0.0;
  std::vector<double> raw_convex;
  GridField last_raw, last_reg;
  for (double h : {0.02, 0.01, 0.005}) {
    const auto grid = Grid2::covering(cx - 0.05, cx + 0.05, ct - 0.05, ct + 0.05, h);
    const auto pts = grid.points();
    const auto raw = lax_forward(inst.phi, s, pts, params);
    const auto reg = regularized_side(inst.phi, s, tau, pair.scale, pts, params);
    GridField fr{grid, raw.values}, fg{grid, reg.values};
    const double kc = semiconvexity_constant(fr);
    const double gv = semiconvexity_constant(fg), gc = semiconcavity_constant(fg);
    raw_convex.push_back(kc);
    reg_convex = std::max(reg_convex, gv);
    reg_concave = std::max(reg_concave, gc);
    study.push_back(Json{{"h", h},
                         {"raw_semiconvexity", kc},
                         {"raw_semiconcavity", semiconcavity_constant(fr)},
                         {"regularized_semiconvexity", gv},
                         {"regularized_semiconcavity", gc}});
    last_raw = fr;
    last_reg = fg;
  }
  r.values["second_differences"] = study;
  r.expect_le("regularized_semiconvex", "semiconvexity constant of the regularised field stays bounded",
              reg_convex, kBound);
  r.expect_le("regularized_semiconcave", "semiconcavity constant of the regularised field stays bounded",
              reg_concave, kBound);
  double min_ratio = kInf;
  for (std::size_t k = 1; k < raw_convex.size(); ++k) {
    min_ratio = std::min(min_ratio, raw_convex[k] / raw_convex[k - 1]);
  }
  r.expect_ge("raw_kink_grows", "the unregularised T_s phi has a growing semiconvexity constant at the kink",
              min_ratio, 1.8);

  // Single Dirac target and a fine row of sources: T_s phi is nearly smooth.
  const auto dirac = c11_instance(row_of_sources(41), DiscreteMeasure::dirac(point_xt(0, 3)), params);
  const DynamicalCoupling dyn1(dirac.result.coupling);
  const SpacetimePoint zc = dyn1.position(30, s);
  const auto grid = Grid2::covering(zc.x[0] - 0.05, zc.x[0] + 0.05, zc.t - 0.05, zc.t + 0.05, 0.01);
  const auto pts = grid.points();
  const auto raw = lax_forward(dirac.phi, s, pts, params);
  const auto reg = regularized_side(dirac.phi, s, tau, 1.0, pts, params);
  double change = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) change = std::max(change, std::abs(raw.values[k] - reg.values[k]));
  r.values["single_dirac_change"] = change;
  r.expect_le("single_dirac_control", "with one target the regularisation barely changes T_s phi",
              change, 1e-3);

  r.csv.emplace_back("raw_field.csv", grid_field_csv(last_raw));
  r.csv.emplace_back("regularized_field.csv", grid_field_csv(last_reg));
  const double lo_x = cx - 0.05, hi_x = cx + 0.05, lo_t = ct - 0.05, hi_t = ct + 0.05;
  SvgPlot p1(lo_x, hi_x, lo_t, hi_t);
  p1.title("T_s phi (h = 0.005)");
  p1.heatmap(last_raw);
  r.svg.emplace_back("raw_field.svg", p1.str());
  SvgPlot p2(lo_x, hi_x, lo_t, hi_t);
  p2.title("regularised field (h = 0.005)");
  p2.heatmap(last_reg);
  r.svg.emplace_back("regularized_field.svg", p2.str());
  SvgPlot p3(-1.2, 1.2, -0.2, 3.2);
  p3.title("interpolation geodesics; s and t slices");
  for (std::size_t k = 0; k < dyn.size(); ++k) {
    const auto a = dyn.position(k, 0.0), b = dyn.position(k, 1.0);
    p3.line(a.x[0], a.t, b.x[0], b.t, "#999", 0.8);
    const auto ps = dyn.position(k, s), pt = dyn.position(k, t);
    p3.dot(ps.x[0], ps.t, 2.5, "blue");
    p3.dot(pt.x[0], pt.t, 2.5, "red");
  }
  r.svg.emplace_back("interpolation.svg", p3.str());
  return r;
}

// ---------------------------------------------------------------------------
// Semigroup laws and the Legendre pair.

Report run_semigroup_laws(const ScenarioConfig& cfg) {
  Report r;
  r.scenario = "semigroup-laws";
  r.parameters = config_json(cfg);
  const CostParams params(cfg.p);
  std::mt19937_64 rng(cfg.seed);
  const double t = 0.7, s = 0.4;

  double down = -kInf, up = -kInf, one_sided = -kInf, with_waypoints = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto xs = random_box(rng, 15, 0.0, 1.0, 0.0, 1.0);
    const auto ys = random_box(rng, 15, 0.0, 1.0, 1.5, 2.5);
    const auto zs = random_box(rng, 15, 0.0, 1.0, 0.5, 1.5);
    ValueField u{xs, {}, 0.0}, v{ys, {}, 0.0};
    for (std::size_t k = 0; k < xs.size(); ++k) u.values.push_back(uniform(rng, -1, 1));
    for (std::size_t k = 0; k < ys.size(); ++k) v.values.push_back(uniform(rng, -1, 1));

    // T̂_t T_t u <= u and T_t T̂_t v >= v.
    const auto tu = lax_forward(u, t, ys, params);
    const auto back = lax_backward(tu, t, xs, params);
    for (std::size_t k = 0; k < xs.size(); ++k) down = std::max(down, back.values[k] - u.values[k]);
    const auto hv = lax_backward(v, t, xs, params);
    const auto fwd = lax_forward(hv, t, ys, params);
    for (std::size_t k = 0; k < ys.size(); ++k) up = std::max(up, v.values[k] - fwd.values[k]);

    // T_{t+s} u <= T_t T_s u on any intermediate carrier.
    const auto direct = lax_forward(u, t + s, ys, params);
    const auto two_step = lax_forward(lax_forward(u, s, zs, params), t, ys, params);
    for (std::size_t k = 0; k < ys.size(); ++k) {
      one_sided = std::max(one_sided, direct.values[k] - two_step.values[k]);
    }
    // Adding the time-s waypoints of all causal pairs gives equality.
    std::vector<SpacetimePoint> way = zs;
    for (const auto& x : xs) {
      for (const auto& y : ys) {
        if (is_causal_future(classify(x, y))) way.push_back(lerp(x, y, s / (t + s)));
      }
    }
    const auto exact = lax_forward(lax_forward(u, s, way, params), t, ys, params);
    for (std::size_t k = 0; k < ys.size(); ++k) {
      with_waypoints = std::max(with_waypoints, std::abs(direct.values[k] - exact.values[k]));
    }
  }
  // Exact up to the rounding of a + b − b.
  r.expect_le("backward_after_forward", "T^_t T_t u <= u on finite carriers", down, 1e-14);
  r.expect_le("forward_after_backward", "T_t T^_t u >= u on finite carriers", up, 1e-14);
  r.expect_le("semigroup_one_sided", "T_{t+s} u <= T_t T_s u on any carrier", one_sided, 1e-14);
  r.expect_le("semigroup_with_waypoints", "equality once geodesic waypoints are carried",
              with_waypoints, 1e-10);

  double ham = 0.0, trip = 0.0, identity = 0.0;
  bool in_cone = true;
  for (int k = 0; k < 1000; ++k) {
    const double dt = uniform(rng, 0.05, 5.0);
    const TangentVector v{dt, {uniform(rng, -0.99, 0.99) * dt}};
    const Covector q = legendre(v, params);
    in_cone = in_cone && in_dual_cone_interior(q);
    const double norm = lorentz_norm(v);
    ham = std::max(ham, std::abs(hamiltonian(q, params) - (1.0 - cfg.p) * std::pow(norm, cfg.p)));
    const TangentVector w = legendre_inverse(q, params);
    trip = std::max({trip, std::abs(w.dt - v.dt), std::abs(w.dx[0] - v.dx[0])});
    identity = std::max(identity, std::abs(hamiltonian(q, params) + lagrangian(v, params) - pairing(q, v)));
  }
  r.expect_le("hamiltonian_identity", "H(legendre(v)) = (1 - p)|v|^p on 1000 timelike vectors",
              ham, 1e-12);
  r.expect_le("legendre_round_trip", "legendre_inverse(legendre(v)) = v", trip, 1e-10);
  r.expect_le("fenchel_identity", "H(q) + L(v) = <q, v> at q = legendre(v)", identity, 1e-12);
  r.expect_true("dual_cone", "legendre maps timelike vectors into int(C*)", in_cone);
  return r;
}

// ---------------------------------------------------------------------------
// Registry.

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{
      "discontinuity",        "unbounded-subdiff", "lightcone-coupling",
      "appendixB-causal-compactness", "duality-battery", "c11-interpolation",
      "semigroup-laws"};
  return names;
}

Report run_scenario(const std::string& name, const ScenarioConfig& cfg) {
  static const std::map<std::string, std::function<Report(const ScenarioConfig&)>> table{
      {"discontinuity", run_example_discontinuity},
      {"unbounded-subdiff", run_example_unbounded_subdiff},
      {"lightcone-coupling", run_example_lightcone_coupling},
      {"appendixB-causal-compactness", run_appendixB_causal_compactness},
      {"duality-battery", run_strong_duality_battery},
      {"c11-interpolation", run_c11_interpolation},
      {"semigroup-laws", run_semigroup_laws}};
  const auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown scenario '" + name + "'");
  return it->second(cfg);
}

}  // namespace lot
