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

#include "lorentz_ot/potentials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace lot {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Hyperbola scan: log-spaced abscissae before the golden-section refinement.
constexpr double kScanLo = 1e-6;
constexpr double kScanHi = 1e6;
constexpr std::size_t kScanPoints = 4000;
constexpr double kBracketTolerance = 1e-10;

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kChainBuilt: return "ChainBuilt";
    case Provenance::kCTransform: return "CTransform";
    case Provenance::kExplicit: return "Explicit";
    case Provenance::kLaxOleinik: return "LaxOleinik";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Chain construction.

ChainPotential::ChainPotential(
    std::vector<std::pair<SpacetimePoint, SpacetimePoint>> pairs, std::size_t anchor,
    const CostParams& params)
    : pairs_(std::move(pairs)), anchor_(anchor), params_(params) {
  const std::size_t k_count = pairs_.size();
  if (k_count == 0) throw std::invalid_argument("ChainPotential: empty support");
  if (anchor_ >= k_count) throw std::invalid_argument("ChainPotential: bad anchor");
  atom_cost_.resize(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    atom_cost_[k] = cost(pairs_[k].first, pairs_[k].second, params_);
    if (atom_cost_[k] == kInf) {
      throw std::invalid_argument("ChainPotential: support pair with infinite cost");
    }
  }
  // swap[i*K + j] = c(x_j, y_i)
  std::vector<double> swap(k_count * k_count);
  for (std::size_t i = 0; i < k_count; ++i) {
    for (std::size_t j = 0; j < k_count; ++j) {
      swap[i * k_count + j] = cost(pairs_[j].first, pairs_[i].second, params_);
    }
  }
  auto relax_round = [&](std::vector<double>& dist) {
    double best_gain = 0.0;
    for (std::size_t i = 0; i < k_count; ++i) {
      if (dist[i] == -kInf) continue;
      for (std::size_t j = 0; j < k_count; ++j) {
        const double c = swap[i * k_count + j];
        if (i == j || c == kInf) continue;
        const double cand = dist[i] + (atom_cost_[i] - c);
        if (cand > dist[j]) {
          best_gain = std::max(best_gain, dist[j] == -kInf ? kInf : cand - dist[j]);
          dist[j] = cand;
        }
      }
    }
    return best_gain;
  };
  std::vector<double> dist(k_count, -kInf);
  dist[anchor_] = 0.0;
  bool settled = false;
  for (std::size_t round = 0; round + 1 < k_count; ++round) {
    if (relax_round(dist) == 0.0) {
      settled = true;
      break;
    }
  }
  if (!settled && k_count > 1) {
    const double gain = relax_round(dist);
    if (gain > kCycleTolerancePerEdge * static_cast<double>(k_count)) {
      throw std::domain_error(
          "ChainPotential: positive cycle in the chain graph (support is not "
          "c-cyclically monotone)");
    }
  }
  chain_ = std::move(dist);
  // Normalise through the same expression the evaluator uses so that the
  // anchor evaluates to 0 exactly.
  double raw = -kInf;
  for (std::size_t k = 0; k < k_count; ++k) {
    if (chain_[k] == -kInf) continue;
    raw = std::max(raw, chain_[k] + atom_cost_[k] -
                            cost(pairs_[anchor_].first, pairs_[k].second, params_));
  }
  norm_ = raw;
}

ExtendedReal ChainPotential::operator()(const SpacetimePoint& x) const {
  double raw = -kInf;
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    if (chain_[k] == -kInf) continue;
    const double c = cost(x, pairs_[k].second, params_);
    if (c == kInf) continue;
    raw = std::max(raw, chain_[k] + atom_cost_[k] - c);
  }
  return raw == -kInf ? -kInf : raw - norm_;
}

std::vector<ExtendedReal> ChainPotential::chain_values() const {
  std::vector<ExtendedReal> out(chain_.size());
  for (std::size_t k = 0; k < chain_.size(); ++k) {
    out[k] = chain_[k] == -kInf ? -kInf : chain_[k] - norm_;
  }
  return out;
}

std::vector<ExtendedReal> ChainPotential::atom_values() const {
  std::vector<ExtendedReal> out(chain_.size());
  for (std::size_t k = 0; k < chain_.size(); ++k) {
    out[k] = chain_[k] == -kInf ? -kInf : chain_[k] + atom_cost_[k] - norm_;
  }
  return out;
}

PotentialField rockafellar_potential(std::span<const SupportPair> gamma,
                                     const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu, std::size_t anchor,
                                     std::span<const SpacetimePoint> query,
                                     const CostParams& params) {
  std::vector<std::pair<SpacetimePoint, SpacetimePoint>> pairs;
  pairs.reserve(gamma.size());
  for (const auto& s : gamma) {
    if (s.row >= mu.size() || s.col >= nu.size()) {
      throw std::invalid_argument("rockafellar_potential: support index out of range");
    }
    pairs.emplace_back(mu.point(s.row), nu.point(s.col));
  }
  const ChainPotential phi(std::move(pairs), anchor, params);
  PotentialField out;
  out.domain.assign(query.begin(), query.end());
  out.values.resize(query.size());
  out.provenance = Provenance::kChainBuilt;
  out.anchor = anchor;
  const auto n = static_cast<std::ptrdiff_t>(query.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    out.values[static_cast<std::size_t>(q)] = phi(query[static_cast<std::size_t>(q)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transforms.

namespace {

ExtendedReal c_transform_at(const PotentialField& phi, const SpacetimePoint& y,
                            const CostParams& params) {
  double best = kInf;
  for (std::size_t i = 0; i < phi.domain.size(); ++i) {
    best = std::min(best, add_for_inf(phi.values[i], cost(phi.domain[i], y, params)));
  }
  return best;
}

void check_field(const PotentialField& f) {
  if (f.domain.size() != f.values.size()) {
    throw std::invalid_argument("PotentialField: domain and values differ in size");
  }
}

}  // namespace

PotentialField c_transform(const PotentialField& phi,
                           std::span<const SpacetimePoint> targets,
                           const CostParams& params) {
  check_field(phi);
  PotentialField out;
  out.domain.assign(targets.begin(), targets.end());
  out.values.resize(targets.size());
  out.provenance = Provenance::kCTransform;
  const auto n = static_cast<std::ptrdiff_t>(targets.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    out.values[uj] = c_transform_at(phi, targets[uj], params);
  }
  return out;
}

namespace serial {
PotentialField c_transform(const PotentialField& phi,
                           std::span<const SpacetimePoint> targets,
                           const CostParams& params) {
  check_field(phi);
  PotentialField out;
  out.domain.assign(targets.begin(), targets.end());
  out.provenance = Provenance::kCTransform;
  for (const auto& y : targets) out.values.push_back(c_transform_at(phi, y, params));
  return out;
}
}  // namespace serial

PotentialField c_envelope(const PotentialField& psi,
                          std::span<const SpacetimePoint> sources,
                          const CostParams& params) {
  check_field(psi);
  PotentialField out;
  out.domain.assign(sources.begin(), sources.end());
  out.values.resize(sources.size());
  out.provenance = Provenance::kCTransform;
  const auto n = static_cast<std::ptrdiff_t>(sources.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    double best = -kInf;
    for (std::size_t j = 0; j < psi.domain.size(); ++j) {
      best = std::max(best, sub_for_sup(psi.values[j],
                                        cost(sources[ui], psi.domain[j], params)));
    }
    out.values[ui] = best;
  }
  return out;
}

std::vector<double> subdifferential_slacks(ExtendedReal phi_x, const SpacetimePoint& x,
                                           const PotentialField& psi,
                                           const CostParams& params) {
  check_field(psi);
  std::vector<double> out(psi.domain.size(), kInf);
  if (!is_finite(phi_x)) return out;
  for (std::size_t j = 0; j < psi.domain.size(); ++j) {
    const double c = cost(x, psi.domain[j], params);
    if (c == kInf || !is_finite(psi.values[j])) continue;
    out[j] = phi_x + c - psi.values[j];
  }
  return out;
}

SubdifferentialSet c_subdifferential(ExtendedReal phi_x, const SpacetimePoint& x,
                                     const PotentialField& psi,
                                     const CostParams& params, double tolerance) {
  if (!is_finite(phi_x)) {
    throw std::invalid_argument("c_subdifferential: phi(x) must be finite");
  }
  SubdifferentialSet out;
  out.x = x;
  out.tolerance = tolerance;
  const auto slacks = subdifferential_slacks(phi_x, x, psi, params);
  for (std::size_t j = 0; j < slacks.size(); ++j) {
    if (std::abs(slacks[j]) <= tolerance) {
      out.entries.push_back({j, psi.domain[j], slacks[j]});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Explicit c-convex functions.

ExplicitCConvex::ExplicitCConvex(CConvexSpec spec, const CostParams& params)
    : spec_(std::move(spec)), params_(params) {}

double ExplicitCConvex::hyperbola_psi(double y1, const CostParams& params) {
  return -std::pow(y1, -params.p());
}

SpacetimePoint ExplicitCConvex::hyperbola_point(double y1) {
  return point_xt(y1, 1.0 / y1);
}

std::pair<ExtendedReal, double> ExplicitCConvex::hyperbola_sup(
    const SpacetimePoint& x) const {
  if (x.dimension() != 1) {
    throw std::invalid_argument("hyperbola example lives in 1+1 dimensions");
  }
  const double p = params_.p(), t = x.t, x1 = x.x[0];
  // ψ(y) − c(x,y) = y₁^{−p}((d y₁)^p − 1) with (d y₁)² = 1 + e.
  auto objective = [&](double y1) -> double {
    if (!is_causal_future(classify(x, hyperbola_point(y1), params_.null_tolerance()))) {
      return -kInf;
    }
    const double e = y1 * (-2.0 * t + t * t * y1 - y1 * (y1 - x1) * (y1 - x1));
    return std::pow(y1, -p) * std::expm1(0.5 * p * std::log1p(e));
  };
  auto refine = [&](double a, double b) {
    double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
    double fc = objective(c), fd = objective(d);
    while (b - a > kBracketTolerance * (1.0 + std::abs(a))) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kGolden * (b - a);
        fc = objective(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kGolden * (b - a);
        fd = objective(d);
      }
    }
    return fc >= fd ? std::pair{fc, c} : std::pair{fd, d};
  };
  const double log_lo = std::log(kScanLo), log_hi = std::log(kScanHi);
  std::vector<double> ys(kScanPoints), fs(kScanPoints);
  for (std::size_t k = 0; k < kScanPoints; ++k) {
    ys[k] = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) /
                                   static_cast<double>(kScanPoints - 1));
    fs[k] = objective(ys[k]);
  }
  // Every local maximum of the scan is refined.
  double value = -kInf, arg = 0.0;
  for (std::size_t k = 0; k < kScanPoints; ++k) {
    if (fs[k] == -kInf) continue;
    const bool left = k == 0 || fs[k] >= fs[k - 1];
    const bool right = k + 1 == kScanPoints || fs[k] >= fs[k + 1];
    if (!left || !right) continue;
    const auto [v, y] = refine(ys[k == 0 ? 0 : k - 1], ys[std::min(k + 1, kScanPoints - 1)]);
    for (const auto& [cv, cy] : {std::pair{fs[k], ys[k]}, std::pair{v, y}}) {
      if (cv > value) {
        value = cv;
        arg = cy;
      }
    }
  }
  return {value, arg};
}

ExtendedReal ExplicitCConvex::operator()(const SpacetimePoint& x) const {
  if (const auto* atoms = std::get_if<AtomsSpec>(&spec_)) {
    double best = -kInf;
    for (const auto& [y, psi] : atoms->atoms) {
      best = std::max(best, sub_for_sup(psi, cost(x, y, params_)));
    }
    return best;
  }
  // ψ(y) − c(x,y) → 0 as y₁ → 0 for every x.
  return std::max(0.0, hyperbola_sup(x).first);
}

std::optional<double> ExplicitCConvex::argmax_y1(const SpacetimePoint& x) const {
  if (!std::holds_alternative<HyperbolaSpec>(spec_)) return std::nullopt;
  const auto [value, arg] = hyperbola_sup(x);
  if (value < -1e-12) return std::nullopt;
  return arg;
}

// ---------------------------------------------------------------------------
// Grids.

Grid2 Grid2::covering(double x_lo, double x_hi, double t_lo, double t_hi, double h) {
  if (!(h > 0.0) || x_hi < x_lo || t_hi < t_lo) {
    throw std::invalid_argument("Grid2::covering: bad bounds or step");
  }
  Grid2 g;
  g.x_min = x_lo;
  g.t_min = t_lo;
  g.h = h;
  g.nx = static_cast<std::size_t>(std::llround((x_hi - x_lo) / h)) + 1;
  g.nt = static_cast<std::size_t>(std::llround((t_hi - t_lo) / h)) + 1;
  return g;
}

SpacetimePoint Grid2::point(std::size_t ix, std::size_t it) const {
  return point_xt(x_min + h * static_cast<double>(ix), t_min + h * static_cast<double>(it));
}

std::vector<SpacetimePoint> Grid2::points() const {
  std::vector<SpacetimePoint> out;
  out.reserve(size());
  for (std::size_t it = 0; it < nt; ++it) {
    for (std::size_t ix = 0; ix < nx; ++ix) out.push_back(point(ix, it));
  }
  return out;
}

GridField sample_on_grid(const Grid2& grid,
                         const std::function<ExtendedReal(const SpacetimePoint&)>& f) {
  GridField out{grid, std::vector<ExtendedReal>(grid.size())};
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    out.values[uk] = f(grid.point(uk % grid.nx, uk / grid.nx));
  }
  return out;
}

Covector grid_gradient(const GridField& phi, std::size_t ix, std::size_t it) {
  const Grid2& g = phi.grid;
  if (ix == 0 || it == 0 || ix + 1 >= g.nx || it + 1 >= g.nt) {
    throw std::invalid_argument("grid_gradient: boundary node");
  }
  const double vals[4] = {phi.at(ix, it + 1), phi.at(ix, it - 1), phi.at(ix + 1, it),
                          phi.at(ix - 1, it)};
  for (double v : vals) {
    if (!is_finite(v)) throw std::invalid_argument("grid_gradient: non-finite stencil");
  }
  return Covector{(vals[0] - vals[1]) / (2.0 * g.h), {(vals[2] - vals[3]) / (2.0 * g.h)}};
}

SpacetimePoint monge_map(const GridField& phi, std::size_t ix, std::size_t it,
                         const CostParams& params) {
  const Covector q = grid_gradient(phi, ix, it);
  return translate(phi.grid.point(ix, it), legendre_inverse(q, params));
}

namespace {

constexpr std::array<std::array<int, 2>, 4> kDirections{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};

// Extreme second-difference quotient; sign = −1 for the minimum.
MaskedConstant second_difference_extreme(const GridField& f, double sign, bool masked) {
  const Grid2& g = f.grid;
  if (f.values.size() != g.size()) throw std::invalid_argument("GridField: size mismatch");
  double extreme = 0.0;
  std::size_t used = 0, skipped = 0;
  bool bad = false;
  const auto nt = static_cast<std::ptrdiff_t>(g.nt);
#pragma omp parallel for reduction(max : extreme) reduction(+ : used, skipped) \
    reduction(|| : bad) schedule(static)
  for (std::ptrdiff_t it = 1; it < nt - 1; ++it) {
    for (std::size_t ix = 1; ix + 1 < g.nx; ++ix) {
      for (const auto& e : kDirections) {
        const auto ut = static_cast<std::size_t>(it);
        const double f0 = f.at(ix, ut);
        const double fp = f.at(ix + e[0], ut + e[1]);
        const double fm = f.at(ix - e[0], ut - e[1]);
        if (!is_finite(f0) || !is_finite(fp) || !is_finite(fm)) {
          ++skipped;
          if (!masked) bad = true;
          continue;
        }
        ++used;
        const double norm2 = g.h * g.h * static_cast<double>(e[0] * e[0] + e[1] * e[1]);
        extreme = std::max(extreme, sign * (fp + fm - 2.0 * f0) / norm2);
      }
    }
  }
  if (bad) throw std::invalid_argument("second-difference diagnostic: non-finite value");
  return {extreme, used, skipped};
}

}  // namespace

double semiconvexity_constant(const GridField& f) {
  return second_difference_extreme(f, -1.0, false).constant;
}

double semiconcavity_constant(const GridField& f) {
  return second_difference_extreme(f, 1.0, false).constant;
}

MaskedConstant semiconvexity_constant_masked(const GridField& f) {
  return second_difference_extreme(f, -1.0, true);
}

MaskedConstant semiconcavity_constant_masked(const GridField& f) {
  return second_difference_extreme(f, 1.0, true);
}

GridField restrict_patch(const GridField& f, std::size_t ix0, std::size_t it0,
                         std::size_t nx, std::size_t nt) {
  if (ix0 + nx > f.grid.nx || it0 + nt > f.grid.nt) {
    throw std::invalid_argument("restrict_patch: patch exceeds the grid");
  }
  GridField out;
  out.grid = f.grid;
  out.grid.x_min = f.grid.x_min + f.grid.h * static_cast<double>(ix0);
  out.grid.t_min = f.grid.t_min + f.grid.h * static_cast<double>(it0);
  out.grid.nx = nx;
  out.grid.nt = nt;
  out.values.reserve(nx * nt);
  for (std::size_t it = 0; it < nt; ++it) {
    for (std::size_t ix = 0; ix < nx; ++ix) out.values.push_back(f.at(ix0 + ix, it0 + it));
  }
  return out;
}

double lightcone_margin(ExtendedReal phi_x, const SpacetimePoint& x,
                        const PotentialField& psi, double delta,
                        const CostParams& params) {
  if (!is_finite(phi_x)) {
    throw std::invalid_argument("lightcone_margin: phi(x) must be finite");
  }
  check_field(psi);
  double sup = -kInf;
  for (std::size_t j = 0; j < psi.domain.size(); ++j) {
    const auto& y = psi.domain[j];
    if (!is_causal_future(classify(x, y, params.null_tolerance()))) continue;
    if (lorentz_distance(x, y, params.null_tolerance()) > delta) continue;
    sup = std::max(sup, sub_for_sup(psi.values[j], cost(x, y, params)));
  }
  return sup == -kInf ? kInf : phi_x - sup;
}

}  // namespace lot
