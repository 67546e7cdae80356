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

#include "lorentz_ot/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace lot {

namespace {

// Sort order used by the duplicate sweeps: points whose times differ by more
// than the tolerance cannot coincide.
std::vector<std::size_t> order_by_time(const std::vector<SpacetimePoint>& pts) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return pts[a].t < pts[b].t; });
  return idx;
}

// Uniform double in [0,1) from the top 53 bits; independent of the standard
// library's distribution implementations so clouds are bitwise reproducible.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<SpacetimePoint> points,
                                 std::vector<double> weights,
                                 double merge_tolerance)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw std::invalid_argument("measure has no atoms");
  if (points_.size() != weights_.size()) {
    throw std::invalid_argument("measure: points/weights length mismatch");
  }
  const std::size_t n = points_.front().dimension();
  if (n == 0) throw std::invalid_argument("measure: spatial dimension must be >= 1");
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (p.dimension() != n) throw std::invalid_argument("measure: mixed dimensions");
    if (!std::isfinite(p.t) ||
        !std::all_of(p.x.begin(), p.x.end(), [](double c) { return std::isfinite(c); })) {
      throw std::invalid_argument("measure: non-finite coordinate");
    }
    if (!(weights_[i] > 0.0)) throw std::invalid_argument("measure: weights must be > 0");
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument("measure: weights sum to " + std::to_string(total));
  }
  const auto idx = order_by_time(points_);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      if (points_[idx[b]].t - points_[idx[a]].t > merge_tolerance) break;
      if (euclidean_distance(points_[idx[a]], points_[idx[b]]) <= merge_tolerance) {
        throw std::invalid_argument("measure: duplicate support points");
      }
    }
  }
}

DiscreteMeasure DiscreteMeasure::dirac(SpacetimePoint p) {
  return DiscreteMeasure({std::move(p)}, {1.0});
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<SpacetimePoint> points) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("measure has no atoms");
  return DiscreteMeasure(std::move(points),
                         std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::size_t DiscreteMeasure::dimension() const {
  return points_.empty() ? 0 : points_.front().dimension();
}

namespace {

std::pair<std::vector<double>, std::vector<double>> sums(const Coupling& c) {
  std::vector<double> rows(c.source.size(), 0.0), cols(c.target.size(), 0.0);
  for (const auto& e : c.entries) {
    if (e.i >= rows.size() || e.j >= cols.size()) {
      throw std::out_of_range("coupling entry index out of range");
    }
    rows[e.i] += e.mass;
    cols[e.j] += e.mass;
  }
  return {rows, cols};
}

DiscreteMeasure restrict(const DiscreteMeasure& m, const std::vector<double>& w) {
  std::vector<SpacetimePoint> pts;
  std::vector<double> ws;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) {
      pts.push_back(m.point(i));
      ws.push_back(w[i]);
    }
  }
  return DiscreteMeasure(std::move(pts), std::move(ws));
}

}  // namespace

std::pair<DiscreteMeasure, DiscreteMeasure> marginals(const Coupling& c) {
  auto [rows, cols] = sums(c);
  return {restrict(c.source, rows), restrict(c.target, cols)};
}

MarginalCheck check_marginals(const Coupling& c, double tolerance) {
  MarginalCheck out;
  auto [rows, cols] = sums(c);
  for (const auto& e : c.entries) {
    if (!(e.mass > 0.0)) out.nonpositive_mass = true;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.max_row_error = std::max(out.max_row_error, std::abs(rows[i] - c.source.weight(i)));
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.max_col_error = std::max(out.max_col_error, std::abs(cols[j] - c.target.weight(j)));
  }
  out.ok = !out.nonpositive_mass && out.max_row_error <= tolerance &&
           out.max_col_error <= tolerance;
  return out;
}

bool is_causal(const Coupling& c, double null_tolerance) {
  return std::all_of(c.entries.begin(), c.entries.end(), [&](const CouplingEntry& e) {
    return is_causal_future(
        classify(c.source.point(e.i), c.target.point(e.j), null_tolerance));
  });
}

bool is_strictly_timelike(const Coupling& c, double null_tolerance) {
  return std::all_of(c.entries.begin(), c.entries.end(), [&](const CouplingEntry& e) {
    return is_timelike_future(
        classify(c.source.point(e.i), c.target.point(e.j), null_tolerance));
  });
}

Coupling product_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  Coupling c{mu, nu, {}};
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      c.entries.push_back({i, j, mu.weight(i) * nu.weight(j)});
    }
  }
  return c;
}

DiscreteMeasure pushforward(
    const DiscreteMeasure& m,
    const std::function<SpacetimePoint(const SpacetimePoint&)>& map,
    double merge_tolerance) {
  std::vector<SpacetimePoint> images;
  images.reserve(m.size());
  for (const auto& p : m.points()) images.push_back(map(p));
  const auto idx = order_by_time(images);
  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> rep_of(images.size(), kNone);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const std::size_t ia = idx[a];
    if (rep_of[ia] != kNone) continue;
    rep_of[ia] = ia;
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const std::size_t ib = idx[b];
      if (images[ib].t - images[ia].t > merge_tolerance) break;
      if (rep_of[ib] == kNone && euclidean_distance(images[ia], images[ib]) <= merge_tolerance) {
        rep_of[ib] = ia;
      }
    }
  }
  // Atoms keep the order of their first preimage.
  std::vector<std::size_t> slot(images.size(), kNone);
  std::vector<SpacetimePoint> pts;
  std::vector<double> ws;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::size_t r = rep_of[i];
    if (slot[r] == kNone) {
      slot[r] = pts.size();
      pts.push_back(images[r]);
      ws.push_back(0.0);
    }
    ws[slot[r]] += m.weight(i);
  }
  return DiscreteMeasure(std::move(pts), std::move(ws), merge_tolerance);
}

// ---------------------------------------------------------------------------
// Rounded rectangle.

namespace {

double smootherstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (u * (6.0 * u - 15.0) + 10.0);
}

// Plateau of height 1 on [lo, hi] with smooth ramps of width w inside it.
double plateau(double s, double lo, double hi, double w) {
  if (s <= lo || s >= hi) return 0.0;
  if (w <= 0.0) return 1.0;
  return smootherstep((s - lo) / w) * smootherstep((hi - s) / w);
}

// Tabulated 1-D profile with its normalised CDF.
class Profile {
 public:
  template <typename F>
  Profile(double lo, double hi, F f, std::size_t cells = 20000)
      : lo_(lo), hi_(hi), cdf_(cells + 1, 0.0), vals_(cells + 1) {
    const double h = (hi - lo) / static_cast<double>(cells);
    for (std::size_t k = 0; k <= cells; ++k) vals_[k] = f(lo + h * static_cast<double>(k));
    for (std::size_t k = 1; k <= cells; ++k) {
      cdf_[k] = cdf_[k - 1] + 0.5 * h * (vals_[k - 1] + vals_[k]);
    }
    total_ = cdf_.back();
    for (double& c : cdf_) c /= total_;
  }

  double total() const { return total_; }

  // Integral of the normalised profile over [lo, s].
  double cdf(double s) const {
    if (s <= lo_) return 0.0;
    if (s >= hi_) return 1.0;
    const double pos = (s - lo_) / (hi_ - lo_) * static_cast<double>(cdf_.size() - 1);
    const auto k = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(k);
    return cdf_[k] + f * (cdf_[k + 1] - cdf_[k]);
  }

  double quantile(double u) const {
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin()) return lo_;
    if (it == cdf_.end()) return hi_;
    const auto k = static_cast<std::size_t>(it - cdf_.begin());
    const double c0 = cdf_[k - 1], c1 = cdf_[k];
    const double f = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
    const double h = (hi_ - lo_) / static_cast<double>(cdf_.size() - 1);
    return lo_ + h * (static_cast<double>(k - 1) + f);
  }

 private:
  double lo_, hi_, total_ = 0.0;
  std::vector<double> cdf_;
  std::vector<double> vals_;
};

struct RectangleProfiles {
  Profile along;
  Profile across;
  double heavy_weight;
};

RectangleProfiles make_profiles(const RoundedRectangleDensity& g) {
  const double L = g.edge_length();
  const double r = g.corner_radius;
  const double T = g.thickness;
  auto base = [=](double a) { return plateau(a, 0.0, L, r); };
  auto heavy = [=](double a) { return plateau(a, L - g.heavy_length, L, r); };
  const Profile pb(0.0, L, base), ph(0.0, L, heavy);
  // Base mass already inside the block, then the weight of the extra plateau
  // that brings the block to heavy_mass.
  const double base_total = pb.total();
  const double base_block = base_total * (1.0 - pb.cdf(L - g.heavy_length));
  const double m = g.heavy_mass;
  const double k = std::max(0.0, (m * base_total - base_block) / (ph.total() * (1.0 - m)));
  return {Profile(0.0, L, [=](double a) { return base(a) + k * heavy(a); }),
          Profile(0.0, T, [=](double b) { return plateau(b, 0.0, T, r); }), k};
}

const RectangleProfiles& cached_profiles(const RoundedRectangleDensity& g) {
  thread_local std::optional<RoundedRectangleDensity> key;
  thread_local std::optional<RectangleProfiles> value;
  const bool same = key && key->top_left == g.top_left && key->top_right == g.top_right &&
                    key->thickness == g.thickness && key->corner_radius == g.corner_radius &&
                    key->heavy_length == g.heavy_length && key->heavy_mass == g.heavy_mass;
  if (!same) {
    value.emplace(make_profiles(g));
    key = g;
  }
  return *value;
}

// Pulls a point of the bounding rectangle onto the rounded shape.
std::pair<double, double> clamp_to_rounded(const RoundedRectangleDensity& g, double a,
                                           double b) {
  const double L = g.edge_length(), T = g.thickness, r = g.corner_radius;
  const double ca = a < r ? r : (a > L - r ? L - r : a);
  const double cb = b < r ? r : (b > T - r ? T - r : b);
  const double da = a - ca, db = b - cb;
  const double dist = std::hypot(da, db);
  if (dist <= r) return {a, b};
  const double s = r * (1.0 - 1e-9) / dist;
  return {ca + da * s, cb + db * s};
}

std::size_t across_count(std::size_t n, double aspect) {
  const double target = std::sqrt(static_cast<double>(n) / aspect);
  std::size_t best = 1;
  double best_err = std::abs(1.0 - target);
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const double err = std::abs(static_cast<double>(d) - target);
    if (err < best_err) {
      best = d;
      best_err = err;
    }
  }
  return best;
}

}  // namespace

double RoundedRectangleDensity::edge_length() const {
  return euclidean_distance(top_left, top_right);
}

SpacetimePoint RoundedRectangleDensity::at(double a, double b) const {
  const double L = edge_length();
  const double ux = (top_right.x[0] - top_left.x[0]) / L;
  const double ut = (top_right.t - top_left.t) / L;
  // Depth direction: the edge direction rotated clockwise in the (x,t) plane.
  const double wx = ut, wt = -ux;
  return point_xt(top_left.x[0] + a * ux + b * wx, top_left.t + a * ut + b * wt);
}

std::pair<double, double> RoundedRectangleDensity::coordinates(
    const SpacetimePoint& p) const {
  const double L = edge_length();
  const double ux = (top_right.x[0] - top_left.x[0]) / L;
  const double ut = (top_right.t - top_left.t) / L;
  const double dx = p.x[0] - top_left.x[0], dt = p.t - top_left.t;
  return {dx * ux + dt * ut, dx * ut - dt * ux};
}

bool RoundedRectangleDensity::contains(const SpacetimePoint& p) const {
  const auto [a, b] = coordinates(p);
  const double L = edge_length(), T = thickness, r = corner_radius;
  if (a < 0.0 || a > L || b < 0.0 || b > T) return false;
  const double ca = a < r ? r : (a > L - r ? L - r : a);
  const double cb = b < r ? r : (b > T - r ? T - r : b);
  return std::hypot(a - ca, b - cb) <= r;
}

bool RoundedRectangleDensity::in_heavy_block(const SpacetimePoint& p) const {
  return contains(p) && coordinates(p).first >= edge_length() - heavy_length;
}

double RoundedRectangleDensity::density(const SpacetimePoint& p) const {
  if (!contains(p)) return 0.0;
  const auto& prof = cached_profiles(*this);
  const auto [a, b] = coordinates(p);
  const double L = edge_length(), r = corner_radius;
  const double along = plateau(a, 0.0, L, r) + prof.heavy_weight * plateau(a, L - heavy_length, L, r);
  return along / prof.along.total() * plateau(b, 0.0, thickness, r) / prof.across.total();
}

double heavy_block_mass(const RoundedRectangleDensity& g) {
  const auto prof = make_profiles(g);
  return 1.0 - prof.along.cdf(g.edge_length() - g.heavy_length);
}

// ---------------------------------------------------------------------------
// Sampling.

namespace {

double radical_inverse(std::size_t k, std::size_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

constexpr std::size_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

struct Sampler {
  std::size_t n;
  std::uint64_t seed;
  SampleMode mode;

  DiscreteMeasure operator()(const DiracMixture& d) const {
    return DiscreteMeasure(d.atoms, d.weights);
  }

  DiscreteMeasure operator()(const UniformSegment& s) const {
    std::mt19937_64 rng(seed);
    std::vector<SpacetimePoint> pts;
    for (std::size_t k = 0; k < n; ++k) {
      const double u = mode == SampleMode::kGrid
                           ? (static_cast<double>(k) + 0.5) / static_cast<double>(n)
                           : unit_uniform(rng);
      pts.push_back(lerp(s.from, s.to, u));
    }
    return DiscreteMeasure::uniform(std::move(pts));
  }

  DiscreteMeasure operator()(const UniformBall& ball) const {
    const std::size_t dim = ball.center.dimension() + 1;
    if (dim > std::size(kPrimes)) throw std::invalid_argument("ball dimension too large");
    std::mt19937_64 rng(seed);
    std::vector<SpacetimePoint> pts;
    std::size_t k = 1;
    while (pts.size() < n) {
      std::vector<double> u(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        const double v = mode == SampleMode::kGrid ? radical_inverse(k, kPrimes[d])
                                                   : unit_uniform(rng);
        u[d] = 2.0 * v - 1.0;
      }
      ++k;
      double r2 = 0.0;
      for (double c : u) r2 += c * c;
      if (r2 > 1.0) continue;
      SpacetimePoint p = ball.center;
      p.t += ball.radius * u[0];
      for (std::size_t d = 1; d < dim; ++d) p.x[d - 1] += ball.radius * u[d];
      pts.push_back(std::move(p));
    }
    return DiscreteMeasure::uniform(std::move(pts));
  }

  DiscreteMeasure operator()(const RoundedRectangleDensity& g) const {
    if (g.top_left.dimension() != 1 || g.top_right.dimension() != 1) {
      throw std::invalid_argument("rounded rectangle lives in 1+1 dimensions");
    }
    if (!(g.thickness > 2.0 * g.corner_radius) ||
        !(g.edge_length() > 2.0 * g.corner_radius + g.heavy_length) ||
        !(g.heavy_mass > 0.0 && g.heavy_mass < 1.0)) {
      throw std::invalid_argument("rounded rectangle: inconsistent parameters");
    }
    const auto prof = make_profiles(g);
    std::vector<SpacetimePoint> pts;
    pts.reserve(n);
    if (mode == SampleMode::kGrid) {
      const std::size_t nb = across_count(n, g.edge_length() / g.thickness);
      const std::size_t na = n / nb;
      for (std::size_t ia = 0; ia < na; ++ia) {
        const double a = prof.along.quantile((static_cast<double>(ia) + 0.5) /
                                             static_cast<double>(na));
        for (std::size_t ib = 0; ib < nb; ++ib) {
          const double b = prof.across.quantile((static_cast<double>(ib) + 0.5) /
                                                static_cast<double>(nb));
          const auto [ca, cb] = clamp_to_rounded(g, a, b);
          pts.push_back(g.at(ca, cb));
        }
      }
    } else {
      std::mt19937_64 rng(seed);
      while (pts.size() < n) {
        const double a = prof.along.quantile(unit_uniform(rng));
        const double b = prof.across.quantile(unit_uniform(rng));
        SpacetimePoint p = g.at(a, b);
        if (g.contains(p)) pts.push_back(std::move(p));
      }
    }
    return DiscreteMeasure::uniform(std::move(pts));
  }
};

}  // namespace

DiscreteMeasure sample(const ScenarioDensity& density, std::size_t n,
                       std::uint64_t seed, SampleMode mode) {
  if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
  return std::visit(Sampler{n, seed, mode}, density);
}

}  // namespace lot
