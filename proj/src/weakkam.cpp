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

#include "lorentz_ot/weakkam.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace lot {

namespace {

void check_field(const ValueField& u) {
  if (u.carrier.size() != u.values.size()) {
    throw std::invalid_argument("ValueField: carrier and values differ in size");
  }
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("Lax-Oleinik time must be finite and nonnegative");
  }
}

ExtendedReal forward_at(const ValueField& u, double t, const SpacetimePoint& y,
                        const CostParams& params) {
  double best = kInf;
  for (std::size_t i = 0; i < u.carrier.size(); ++i) {
    best = std::min(best, add_for_inf(u.values[i], cost_t(t, u.carrier[i], y, params)));
  }
  return best;
}

ExtendedReal backward_at(const ValueField& u, double s, const SpacetimePoint& x,
                         const CostParams& params) {
  double best = -kInf;
  for (std::size_t j = 0; j < u.carrier.size(); ++j) {
    best = std::max(best, sub_for_sup(u.values[j], cost_t(s, x, u.carrier[j], params)));
  }
  return best;
}

template <typename Kernel>
ValueField evolve_parallel(const ValueField& u, double time, double label,
                           std::span<const SpacetimePoint> where, Kernel kernel,
                           const CostParams& params) {
  ValueField out{{where.begin(), where.end()}, std::vector<ExtendedReal>(where.size()), label};
  const auto n = static_cast<std::ptrdiff_t>(where.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    out.values[uk] = kernel(u, time, where[uk], params);
  }
  return out;
}

}  // namespace

ValueField lax_forward(const ValueField& u, double t,
                       std::span<const SpacetimePoint> targets, const CostParams& params) {
  check_field(u);
  check_time(t);
  return evolve_parallel(u, t, u.time + t, targets, forward_at, params);
}

ValueField lax_backward(const ValueField& u, double s,
                        std::span<const SpacetimePoint> sources, const CostParams& params) {
  check_field(u);
  check_time(s);
  return evolve_parallel(u, s, u.time - s, sources, backward_at, params);
}

namespace serial {

ValueField lax_forward(const ValueField& u, double t,
                       std::span<const SpacetimePoint> targets, const CostParams& params) {
  check_field(u);
  check_time(t);
  ValueField out{{targets.begin(), targets.end()}, {}, u.time + t};
  for (const auto& y : targets) out.values.push_back(forward_at(u, t, y, params));
  return out;
}

ValueField lax_backward(const ValueField& u, double s,
                        std::span<const SpacetimePoint> sources, const CostParams& params) {
  check_field(u);
  check_time(s);
  ValueField out{{sources.begin(), sources.end()}, {}, u.time - s};
  for (const auto& x : sources) out.values.push_back(backward_at(u, s, x, params));
  return out;
}

}  // namespace serial

// ---------------------------------------------------------------------------
// Dynamical couplings.

DynamicalCoupling::DynamicalCoupling(Coupling base, double null_tolerance)
    : base_(std::move(base)) {
  if (!is_causal(base_, null_tolerance)) {
    throw std::invalid_argument("DynamicalCoupling: coupling is not causal");
  }
}

SpacetimePoint DynamicalCoupling::position(std::size_t entry, double s) const {
  const auto& e = base_.entries.at(entry);
  return lerp(base_.source.point(e.i), base_.target.point(e.j), s);
}

namespace {

// Merges points closer than the merge tolerance; returns the measure and the
// index of every input point in it.
std::pair<DiscreteMeasure, std::vector<std::size_t>> merged_measure(
    const std::vector<SpacetimePoint>& points, const std::vector<double>& masses) {
  std::vector<SpacetimePoint> uniq;
  std::vector<double> weights;
  std::vector<std::size_t> index(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::size_t found = uniq.size();
    for (std::size_t u = 0; u < uniq.size(); ++u) {
      if (euclidean_distance(uniq[u], points[k]) <= kDefaultMergeTolerance) {
        found = u;
        break;
      }
    }
    if (found == uniq.size()) {
      uniq.push_back(points[k]);
      weights.push_back(0.0);
    }
    weights[found] += masses[k];
    index[k] = found;
  }
  return {DiscreteMeasure(std::move(uniq), std::move(weights)), std::move(index)};
}

}  // namespace

Interpolation displacement_interpolate(const DynamicalCoupling& dyn, double s, double t) {
  if (!(0.0 <= s && s < t && t <= 1.0)) {
    throw std::invalid_argument("displacement_interpolate: need 0 <= s < t <= 1");
  }
  const Coupling& base = dyn.base();
  const std::size_t m = dyn.size();
  std::vector<double> masses(m);
  for (std::size_t k = 0; k < m; ++k) masses[k] = base.entries[k].mass;

  auto side = [&](double r) -> std::pair<DiscreteMeasure, std::vector<std::size_t>> {
    std::vector<std::size_t> index(m);
    if (r == 0.0 || r == 1.0) {
      const bool use_source = r == 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        index[k] = use_source ? base.entries[k].i : base.entries[k].j;
      }
      return {use_source ? base.source : base.target, std::move(index)};
    }
    std::vector<SpacetimePoint> pts(m);
    for (std::size_t k = 0; k < m; ++k) pts[k] = dyn.position(k, r);
    return merged_measure(pts, masses);
  };
  auto [mu_s, idx_s] = side(s);
  auto [mu_t, idx_t] = side(t);

  std::map<std::pair<std::size_t, std::size_t>, double> agg;
  for (std::size_t k = 0; k < m; ++k) agg[{idx_s[k], idx_t[k]}] += masses[k];
  Interpolation out{mu_s, mu_t, Coupling{mu_s, mu_t, {}}};
  for (const auto& [key, mass] : agg) out.pi_st.entries.push_back({key.first, key.second, mass});
  return out;
}

// ---------------------------------------------------------------------------
// Calibration.

CalibrationReport calibration_check(const ValueField& phi, const ValueField& psi,
                                    const Coupling& coupling, const CostParams& params,
                                    double cost_time) {
  check_field(phi);
  check_field(psi);
  CalibrationReport r;
  for (std::size_t i = 0; i < phi.carrier.size(); ++i) {
    for (std::size_t j = 0; j < psi.carrier.size(); ++j) {
      const double c = cost_t(cost_time, phi.carrier[i], psi.carrier[j], params);
      if (c == kInf) continue;
      const double v = sub_for_sup(sub_for_sup(psi.values[j], phi.values[i]), c);
      if (v > r.max_subsolution_violation) {
        r.max_subsolution_violation = v;
        r.violation_row = i;
        r.violation_col = j;
      }
    }
  }
  for (std::size_t k = 0; k < coupling.entries.size(); ++k) {
    const auto& e = coupling.entries[k];
    if (e.i >= phi.carrier.size() || e.j >= psi.carrier.size()) {
      throw std::invalid_argument("calibration_check: coupling index out of range");
    }
    const double c = cost_t(cost_time, phi.carrier[e.i], psi.carrier[e.j], params);
    double res = std::abs(psi.values[e.j] - phi.values[e.i] - c);
    if (std::isnan(res)) res = kInf;
    if (res > r.max_calibration_residual) {
      r.max_calibration_residual = res;
      r.residual_entry = k;
    }
  }
  return r;
}

double geodesic_calibration_residual(const ValueField& u, const DynamicalCoupling& dyn,
                                     std::span<const double> times,
                                     const CostParams& params) {
  check_field(u);
  double worst = 0.0;
  for (std::size_t k = 0; k < dyn.size(); ++k) {
    std::vector<double> vals(times.size());
    std::vector<SpacetimePoint> pts(times.size());
    for (std::size_t q = 0; q < times.size(); ++q) {
      pts[q] = dyn.position(k, times[q]);
      vals[q] = forward_at(u, times[q], pts[q], params);
    }
    for (std::size_t q = 0; q + 1 < times.size(); ++q) {
      const double c = cost_t(times[q + 1] - times[q], pts[q], pts[q + 1], params);
      double res = std::abs(vals[q + 1] - vals[q] - c);
      if (std::isnan(res)) res = kInf;
      worst = std::max(worst, res);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Sup-inf regularisation.

namespace {

constexpr std::size_t kModelSize = 6;
constexpr std::size_t kMaxIterations = 400;
constexpr double kInitialRadius = 0.05;
constexpr double kMinRadius = 1e-13;

struct Branch {
  double value = kInf;  // u_k + c_a(x_k,w) − c_b(z,w)
  double gx = 0.0, gt = 0.0;
  bool smooth = false;
};

class SupInfProblem {
 public:
  SupInfProblem(const ValueField& u, double a, double b, const SpacetimePoint& z,
                const CostParams& params)
      : u_(u), a_(a), b_(b), z_(z), params_(params),
        ka_(std::pow(a, 1.0 - params.p())), kb_(std::pow(b, 1.0 - params.p())) {}

  // f(w) = min_k u_k + c_a(x_k,w), minus c_b(z,w).
  double value(const SpacetimePoint& w) const {
    double inner = kInf;
    for (std::size_t k = 0; k < u_.carrier.size(); ++k) {
      inner = std::min(inner, add_for_inf(u_.values[k], cost_t(a_, u_.carrier[k], w, params_)));
    }
    return sub_for_sup(inner, cost_t(b_, z_, w, params_));
  }

  std::vector<Branch> branches(const SpacetimePoint& w) const {
    const double tol = params_.null_tolerance();
    const double cz = cost_t(b_, z_, w, params_);
    const bool z_timelike = is_timelike_future(classify(z_, w, tol));
    std::vector<Branch> out;
    for (std::size_t k = 0; k < u_.carrier.size(); ++k) {
      Branch br;
      const double c = cost_t(a_, u_.carrier[k], w, params_);
      br.value = sub_for_sup(add_for_inf(u_.values[k], c), cz);
      if (!is_finite(br.value)) continue;
      if (z_timelike && is_timelike_future(classify(u_.carrier[k], w, tol))) {
        // ∂_w d^p(x,w) = p d^{p−2} (Δt, −Δx) in (t, x) components.
        const double p = params_.p();
        const double dtx = w.t - u_.carrier[k].t, dxx = w.x[0] - u_.carrier[k].x[0];
        const double dtz = w.t - z_.t, dxz = w.x[0] - z_.x[0];
        const double dx_ = std::sqrt(dtx * dtx - dxx * dxx);
        const double dz_ = std::sqrt(dtz * dtz - dxz * dxz);
        const double fx = p * std::pow(dx_, p - 2.0), fz = p * std::pow(dz_, p - 2.0);
        br.gt = -ka_ * fx * dtx + kb_ * fz * dtz;
        br.gx = ka_ * fx * dxx - kb_ * fz * dxz;
        br.smooth = true;
      }
      out.push_back(br);
    }
    return out;
  }

 private:
  const ValueField& u_;
  double a_, b_;
  const SpacetimePoint& z_;
  const CostParams& params_;
  double ka_, kb_;
};

// max over the box |Δ|∞ ≤ ρ of min_k (v_k + g_k·Δ); returns (model value, Δ).
std::pair<double, std::array<double, 2>> solve_model(const std::vector<Branch>& m,
                                                     double rho) {
  auto model = [&](double dx, double dt) {
    double v = kInf;
    for (const auto& b : m) v = std::min(v, b.value + b.gx * dx + b.gt * dt);
    return v;
  };
  double best = -kInf;
  std::array<double, 2> arg{0.0, 0.0};
  auto consider = [&](double dx, double dt) {
    if (std::abs(dx) > rho * (1 + 1e-12) || std::abs(dt) > rho * (1 + 1e-12)) return;
    const double v = model(dx, dt);
    if (v > best) {
      best = v;
      arg = {dx, dt};
    }
  };
  consider(0.0, 0.0);
  for (double sx : {-rho, rho}) {
    for (double st : {-rho, rho}) consider(sx, st);
  }
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // (v_i − v_j) + (g_i − g_j)·Δ = 0 on each box edge.
      const double c0 = m[i].value - m[j].value;
      const double cx = m[i].gx - m[j].gx, ct = m[i].gt - m[j].gt;
      for (double e : {-rho, rho}) {
        if (ct != 0.0) consider(e, -(c0 + cx * e) / ct);
        if (cx != 0.0) consider(-(c0 + ct * e) / cx, e);
      }
      for (std::size_t k = j + 1; k < n; ++k) {
        const double d0 = m[i].value - m[k].value;
        const double dx = m[i].gx - m[k].gx, dt = m[i].gt - m[k].gt;
        const double det = cx * dt - ct * dx;
        if (std::abs(det) < 1e-300) continue;
        consider((-c0 * dt + ct * d0) / det, (-cx * d0 + c0 * dx) / det);
      }
    }
  }
  return {best, arg};
}

}  // namespace

ExtendedReal sup_inf_convolution(const ValueField& u, double a, double b,
                                 const SpacetimePoint& z, const CostParams& params) {
  check_field(u);
  if (!(b > 0.0) || !(a >= b)) {
    throw std::invalid_argument("sup_inf_convolution: need a >= b > 0");
  }
  if (z.dimension() != 1) {
    throw std::invalid_argument("sup_inf_convolution: implemented in 1+1 dimensions");
  }
  const SupInfProblem problem(u, a, b, z, params);
  const double tol = params.null_tolerance();

  // Branch bounds u_k + c_{a−b}(x_k, z) and their maximisers.
  double upper = kInf;
  std::vector<SpacetimePoint> starts;
  for (std::size_t k = 0; k < u.carrier.size(); ++k) {
    if (!is_finite(u.values[k])) continue;
    upper = std::min(upper, add_for_inf(u.values[k], cost_t(a - b, u.carrier[k], z, params)));
    if (a > b && is_timelike_future(classify(u.carrier[k], z, tol))) {
      starts.push_back(lerp(u.carrier[k], z, a / (a - b)));
    }
  }
  starts.push_back(point_xt(z.x[0], z.t + b));

  SpacetimePoint w;
  double best = -kInf;
  for (const auto& s : starts) {
    const double v = problem.value(s);
    if (v > best) {
      best = v;
      w = s;
    }
  }
  if (best == -kInf) return -kInf;
  const double reached = upper - 1e-14 * (1.0 + std::abs(upper));
  if (best >= reached) return best;

  double rho = kInitialRadius;
  for (std::size_t iter = 0; iter < kMaxIterations && rho > kMinRadius; ++iter) {
    auto all = problem.branches(w);
    std::erase_if(all, [](const Branch& br) { return !br.smooth; });
    if (all.empty()) break;
    std::sort(all.begin(), all.end(),
              [](const Branch& l, const Branch& r) { return l.value < r.value; });
    if (all.size() > kModelSize) all.resize(kModelSize);
    const auto [predicted, step] = solve_model(all, rho);
    const double gain_model = predicted - best;
    if (!(gain_model > 1e-17 * (1.0 + std::abs(best)))) break;
    const SpacetimePoint trial = point_xt(w.x[0] + step[0], w.t + step[1]);
    const double v = problem.value(trial);
    const double ratio = (v - best) / gain_model;
    if (v > best && ratio > 0.1) {
      best = v;
      w = trial;
      if (ratio > 0.75) rho = std::min(2.0 * rho, 1.0);
      if (best >= reached) return best;
    } else {
      rho *= 0.25;
    }
  }
  return best;
}

ValueField regularized_side(const ValueField& phi, double r, double tau, double scale,
                            std::span<const SpacetimePoint> carrier,
                            const CostParams& params) {
  check_field(phi);
  ValueField out{{carrier.begin(), carrier.end()}, std::vector<ExtendedReal>(carrier.size()),
                 phi.time + r};
  const auto n = static_cast<std::ptrdiff_t>(carrier.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const double v = sup_inf_convolution(phi, r + tau, tau, carrier[uk], params);
    out.values[uk] = is_finite(v) ? scale * v : v;
  }
  return out;
}

RegularizedPair regularized_pair(const ValueField& phi, double s, double t, double tau,
                                 std::span<const SpacetimePoint> carrier_s,
                                 std::span<const SpacetimePoint> carrier_t,
                                 const CostParams& params) {
  if (!(0.0 <= s && s < t && t <= 1.0)) {
    throw std::invalid_argument("regularized_pair: need 0 <= s < t <= 1");
  }
  if (!(tau > 0.0) || tau > std::min(t - s, 1.0 - t) + 1e-12) {
    throw std::invalid_argument("regularized_pair: need 0 < tau <= min(t - s, 1 - t)");
  }
  const double scale = std::pow(t - s, -(1.0 - params.p()));
  return {regularized_side(phi, s, tau, scale, carrier_s, params),
          regularized_side(phi, t, tau, scale, carrier_t, params), scale};
}

}  // namespace lot
