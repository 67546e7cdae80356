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

#ifndef LORENTZ_OT_MEASURES_HPP_
#define LORENTZ_OT_MEASURES_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "lorentz_ot/geometry.hpp"

namespace lot {

inline constexpr double kWeightSumTolerance = 1e-12;
inline constexpr double kMarginalTolerance = 1e-10;
inline constexpr double kDefaultMergeTolerance = 1e-9;

// Finitely supported probability measure. Construction validates: equal
// dimensions, finite coordinates, positive weights summing to one (within
// 1e-12), and points pairwise farther apart than the merge tolerance.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<SpacetimePoint> points, std::vector<double> weights,
                  double merge_tolerance = kDefaultMergeTolerance);

  static DiscreteMeasure dirac(SpacetimePoint p);
  static DiscreteMeasure uniform(std::vector<SpacetimePoint> points);

  std::size_t size() const { return points_.size(); }
  std::size_t dimension() const;
  const std::vector<SpacetimePoint>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  const SpacetimePoint& point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

 private:
  std::vector<SpacetimePoint> points_;
  std::vector<double> weights_;
};

struct CouplingEntry {
  std::size_t i = 0;  // source index
  std::size_t j = 0;  // target index
  double mass = 0.0;
};

// Sparse transport plan between two discrete measures.
struct Coupling {
  DiscreteMeasure source;
  DiscreteMeasure target;
  std::vector<CouplingEntry> entries;
};

struct MarginalCheck {
  bool ok = false;
  double max_row_error = 0.0;
  double max_col_error = 0.0;
  bool nonpositive_mass = false;
};

// Row and column sums as measures over the source / target supports. Rows or
// columns without mass are dropped (the result is then not a probability
// measure on the full support, which check_marginals reports).
std::pair<DiscreteMeasure, DiscreteMeasure> marginals(const Coupling& c);

MarginalCheck check_marginals(const Coupling& c,
                              double tolerance = kMarginalTolerance);

bool is_causal(const Coupling& c, double null_tolerance = kDefaultNullTolerance);
bool is_strictly_timelike(const Coupling& c,
                          double null_tolerance = kDefaultNullTolerance);

Coupling product_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Image measure; coincident images (within merge_tolerance) are merged.
DiscreteMeasure pushforward(
    const DiscreteMeasure& m,
    const std::function<SpacetimePoint(const SpacetimePoint&)>& map,
    double merge_tolerance = kDefaultMergeTolerance);

// ---------------------------------------------------------------------------
// Sampleable densities.

struct DiracMixture {
  std::vector<SpacetimePoint> atoms;
  std::vector<double> weights;
};

// Uniform (1-dimensional Hausdorff) measure on the segment [from, to].
struct UniformSegment {
  SpacetimePoint from;
  SpacetimePoint to;
};

// Uniform measure on a Euclidean ball in coordinates.
struct UniformBall {
  SpacetimePoint center;
  double radius = 1.0;
};

// Smooth density on a rectangle in 1+1 dimensions whose top edge runs from
// `top_left` to `top_right`; the rectangle extends `thickness` to the right of
// that edge direction (rotated clockwise by 90°). Corners are rounded by
// quarter circles of radius `corner_radius`.
//
// The density is separable in edge coordinates (a along the edge, b across):
// g(a,b) ∝ f_a(a)·f_b(b), where each factor is a plateau with smoothstep
// ramps of width `corner_radius`; f_a carries an extra plateau on the last
// `heavy_length` of the edge so that the end block holds `heavy_mass` of
// the total.
struct RoundedRectangleDensity {
  SpacetimePoint top_left = point_xt(-0.05, 0.05);
  SpacetimePoint top_right = point_xt(3.0, -3.0);
  double thickness = 1.0;
  double corner_radius = 0.1;
  double heavy_length = 0.5;
  double heavy_mass = 0.6;

  double edge_length() const;
  // Point at edge coordinate a ∈ [0, L] and depth b ∈ [0, thickness].
  SpacetimePoint at(double a, double b) const;
  // Inverse of `at`.
  std::pair<double, double> coordinates(const SpacetimePoint& p) const;
  bool contains(const SpacetimePoint& p) const;
  bool in_heavy_block(const SpacetimePoint& p) const;
  // Normalised density value; integrates to 1 over the plane.
  double density(const SpacetimePoint& p) const;
};

using ScenarioDensity =
    std::variant<DiracMixture, UniformSegment, UniformBall, RoundedRectangleDensity>;

enum class SampleMode {
  kGrid,    // deterministic quasi-uniform placement (quantile midpoints)
  kRandom,  // i.i.d. draws from a seeded generator
};

// n points with weights 1/n (Dirac mixtures return their atoms exactly).
// Throws std::invalid_argument for n == 0.
DiscreteMeasure sample(const ScenarioDensity& density, std::size_t n,
                       std::uint64_t seed, SampleMode mode = SampleMode::kGrid);

// Exact mass of the heavy end block under the continuous density.
double heavy_block_mass(const RoundedRectangleDensity& g);

}  // namespace lot

#endif  // LORENTZ_OT_MEASURES_HPP_
