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

// Potentials for the causal cost: the chain (Rockafellar) construction of
// π-solutions, c-transforms and c-subdifferentials, explicit c-convex
// functions, Monge-map recovery and finite-difference regularity diagnostics
// on uniform 1+1 grids.

#ifndef LORENTZ_OT_POTENTIALS_HPP_
#define LORENTZ_OT_POTENTIALS_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lorentz_ot/geometry.hpp"
#include "lorentz_ot/measures.hpp"
#include "lorentz_ot/transport.hpp"

namespace lot {

inline constexpr double kSubdifferentialTolerance = 1e-7;

enum class Provenance { kChainBuilt, kCTransform, kExplicit, kLaxOleinik };

std::string_view to_string(Provenance p);

// Extended-real function on a finite point set.
struct PotentialField {
  std::vector<SpacetimePoint> domain;
  std::vector<ExtendedReal> values;
  Provenance provenance = Provenance::kExplicit;
  std::optional<std::size_t> anchor;  // chain-built only: index of the anchor pair
};

// φ(x) = sup over chains (x₀,y₀),(x₁,y₁),…,(x_k,y_k) in Γ starting at the
// anchor of Σ c(x_i,y_i) − c(x_{i+1},y_i), with x_{k+1} = x.
//
// Longest paths L_k from the anchor in the chain graph (edge i→j of weight
// c(x_i,y_i) − c(x_j,y_i)) are computed once; then
// φ(x) = max_k L_k + c(x_k,y_k) − c(x,y_k), normalised so that φ(x₀) = 0.
class ChainPotential {
 public:
  // Throws std::invalid_argument on an empty Γ, a bad anchor or an infinite
  // pair, and std::domain_error if the chain graph has a positive cycle
  // (Γ is not c-cyclically monotone).
  ChainPotential(std::vector<std::pair<SpacetimePoint, SpacetimePoint>> pairs,
                 std::size_t anchor, const CostParams& params);

  ExtendedReal operator()(const SpacetimePoint& x) const;

  std::size_t size() const { return pairs_.size(); }
  std::size_t anchor() const { return anchor_; }
  const std::vector<std::pair<SpacetimePoint, SpacetimePoint>>& pairs() const {
    return pairs_;
  }
  // Normalised longest-path values; −∞ for pairs not reachable from the anchor.
  std::vector<ExtendedReal> chain_values() const;
  // Atom values ψ_k = L_k + c(x_k,y_k) (normalised) so that
  // φ(x) = max_k ψ_k − c(x, y_k).
  std::vector<ExtendedReal> atom_values() const;

 private:
  std::vector<std::pair<SpacetimePoint, SpacetimePoint>> pairs_;
  std::size_t anchor_;
  CostParams params_;
  std::vector<ExtendedReal> chain_;      // raw longest-path values
  std::vector<ExtendedReal> atom_cost_;  // c(x_k, y_k)
  double norm_ = 0.0;                    // raw value at the anchor source
};

// Chain potential of the support pairs (indices into μ, ν) evaluated on
// `query`.
PotentialField rockafellar_potential(std::span<const SupportPair> gamma,
                                     const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu, std::size_t anchor,
                                     std::span<const SpacetimePoint> query,
                                     const CostParams& params);

// φ^c(y) = inf_x φ(x) + c(x,y) with −∞ + ∞ := +∞.
PotentialField c_transform(const PotentialField& phi,
                           std::span<const SpacetimePoint> targets,
                           const CostParams& params);

// ψ^c̄(x) = sup_y ψ(y) − c(x,y) with ±∞ ∓ ∞ := −∞.
PotentialField c_envelope(const PotentialField& psi,
                          std::span<const SpacetimePoint> sources,
                          const CostParams& params);

namespace serial {
PotentialField c_transform(const PotentialField& phi,
                           std::span<const SpacetimePoint> targets,
                           const CostParams& params);
}  // namespace serial

struct SubdifferentialEntry {
  std::size_t index = 0;  // into the candidate field
  SpacetimePoint y;
  double slack = 0.0;  // φ(x) + c(x,y) − ψ(y)
};

struct SubdifferentialSet {
  SpacetimePoint x;
  double tolerance = kSubdifferentialTolerance;
  std::vector<SubdifferentialEntry> entries;  // members only, by increasing index
};

// Candidates y ∈ psi.domain with ψ(y), c(x,y) finite and |slack| ≤ tol.
// Throws std::invalid_argument unless phi_x is finite.
SubdifferentialSet c_subdifferential(ExtendedReal phi_x, const SpacetimePoint& x,
                                     const PotentialField& psi,
                                     const CostParams& params,
                                     double tolerance = kSubdifferentialTolerance);

// Slack φ(x) + c(x,y) − ψ(y) for every candidate (+∞ where undefined).
std::vector<double> subdifferential_slacks(ExtendedReal phi_x, const SpacetimePoint& x,
                                           const PotentialField& psi,
                                           const CostParams& params);

// ---------------------------------------------------------------------------
// Explicit c-convex functions φ(x) = sup_y ψ(y) − c(x,y).

struct AtomsSpec {
  std::vector<std::pair<SpacetimePoint, double>> atoms;  // (y, ψ(y))
};

// ψ(y) = −y₁^{−p} on the hyperbola y = (y₁, 1/y₁) (spatial, temporal), y₁ > 0,
// and −∞ elsewhere.
struct HyperbolaSpec {};

using CConvexSpec = std::variant<AtomsSpec, HyperbolaSpec>;

class ExplicitCConvex {
 public:
  ExplicitCConvex(CConvexSpec spec, const CostParams& params);

  ExtendedReal operator()(const SpacetimePoint& x) const;

  // Hyperbola only: the maximising y₁. Empty when the supremum is only the
  // limit y₁ → 0 (interior best below −1e-12).
  std::optional<double> argmax_y1(const SpacetimePoint& x) const;

  // Hyperbola only: ψ at the hyperbola point with abscissa y1.
  static double hyperbola_psi(double y1, const CostParams& params);
  static SpacetimePoint hyperbola_point(double y1);

  const CConvexSpec& spec() const { return spec_; }

 private:
  std::pair<ExtendedReal, double> hyperbola_sup(const SpacetimePoint& x) const;

  CConvexSpec spec_;
  CostParams params_;
};

// ---------------------------------------------------------------------------
// Uniform grids in 1+1 dimensions.

struct Grid2 {
  double x_min = 0.0;  // spatial origin
  double t_min = 0.0;  // temporal origin
  double h = 0.01;
  std::size_t nx = 1;
  std::size_t nt = 1;

  // Grid of step h covering [x_lo, x_hi] × [t_lo, t_hi] (endpoints included
  // up to rounding).
  static Grid2 covering(double x_lo, double x_hi, double t_lo, double t_hi, double h);

  std::size_t size() const { return nx * nt; }
  std::size_t index(std::size_t ix, std::size_t it) const { return it * nx + ix; }
  SpacetimePoint point(std::size_t ix, std::size_t it) const;
  std::vector<SpacetimePoint> points() const;
};

struct GridField {
  Grid2 grid;
  std::vector<ExtendedReal> values;

  ExtendedReal at(std::size_t ix, std::size_t it) const {
    return values[grid.index(ix, it)];
  }
};

GridField sample_on_grid(const Grid2& grid,
                         const std::function<ExtendedReal(const SpacetimePoint&)>& f);

// y = x + legendre_inverse(∇φ(x)) with central differences of step h at an
// interior grid node. Throws std::invalid_argument at boundary nodes or
// non-finite stencils, std::domain_error if ∇φ(x) ∉ int(𝒞*).
SpacetimePoint monge_map(const GridField& phi, std::size_t ix, std::size_t it,
                         const CostParams& params);

// Central-difference covector (∂_t φ, ∂_x φ).
Covector grid_gradient(const GridField& phi, std::size_t ix, std::size_t it);

// K̂ = max(0, −min (f(x+he) + f(x−he) − 2f(x)) / |he|²) over interior nodes and
// the directions (1,0), (0,1), (1,1), (1,−1). Throws std::invalid_argument
// on non-finite values.
double semiconvexity_constant(const GridField& f);
// Same with the maximum second difference: f is K-semiconcave.
double semiconcavity_constant(const GridField& f);

struct MaskedConstant {
  double constant = 0.0;
  std::size_t stencils_used = 0;
  std::size_t stencils_skipped = 0;
};

// Variants that skip stencils touching a non-finite value.
MaskedConstant semiconvexity_constant_masked(const GridField& f);
MaskedConstant semiconcavity_constant_masked(const GridField& f);

// Sub-grid [ix0, ix0+nx) × [it0, it0+nt).
GridField restrict_patch(const GridField& f, std::size_t ix0, std::size_t it0,
                         std::size_t nx, std::size_t nt);

// φ(x) − sup{ψ(y) − c(x,y) : y ∈ psi.domain, y ∈ J⁺(x), d(x,y) ≤ δ}; +∞ when no
// candidate qualifies. Throws std::invalid_argument unless phi_x is finite.
double lightcone_margin(ExtendedReal phi_x, const SpacetimePoint& x,
                        const PotentialField& psi, double delta,
                        const CostParams& params);

}  // namespace lot

#endif  // LORENTZ_OT_POTENTIALS_HPP_
