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

// Flat Minkowski spacetime R^{1,n} with signature (−,+,…,+).
//
// Everything here is closed form: causal classification, time separation,
// the cost c(x,y) = −d(x,y)^p on J⁺ (+∞ elsewhere), its time-t rescaling,
// affine geodesics, and the Lagrangian / Legendre transform / Hamiltonian
// triple L(v) = −|v|_g^p.

#ifndef LORENTZ_OT_GEOMETRY_HPP_
#define LORENTZ_OT_GEOMETRY_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

#include "lorentz_ot/extended_real.hpp"

namespace lot {

inline constexpr double kDefaultNullTolerance = 1e-12;

struct SpacetimePoint {
  double t = 0.0;
  std::vector<double> x;

  SpacetimePoint() = default;
  SpacetimePoint(double time, std::vector<double> space)
      : t(time), x(std::move(space)) {}

  std::size_t dimension() const { return x.size(); }
  friend bool operator==(const SpacetimePoint&, const SpacetimePoint&) = default;
};

// Convenience for the 1+1 examples, which the literature writes as
// (spatial, temporal).
inline SpacetimePoint point_xt(double space, double time) {
  return SpacetimePoint(time, {space});
}

struct TangentVector {
  double dt = 0.0;
  std::vector<double> dx;
};

struct Covector {
  double pt = 0.0;
  std::vector<double> px;
};

enum class CausalClass {
  kStrictlyTimelikeFuture,
  kNullFuture,
  kSpacelike,
  kNullPast,
  kStrictlyTimelikePast,
  kCoincident,
};

std::string_view to_string(CausalClass c);

// Future↔past exchange; classify(y, x) == reversed(classify(x, y)).
CausalClass reversed(CausalClass c);

// y ∈ J⁺(x).
inline bool is_causal_future(CausalClass c) {
  return c == CausalClass::kStrictlyTimelikeFuture ||
         c == CausalClass::kNullFuture || c == CausalClass::kCoincident;
}

// y ∈ I⁺(x).
inline bool is_timelike_future(CausalClass c) {
  return c == CausalClass::kStrictlyTimelikeFuture;
}

// Exponent p of the cost, 0 < p < 1.
class CostParams {
 public:
  explicit CostParams(double p = 0.5, double null_tolerance = kDefaultNullTolerance);

  double p() const { return p_; }
  double null_tolerance() const { return null_tolerance_; }

 private:
  double p_;
  double null_tolerance_;
};

// Euclidean (coordinate) norm of the spatial part.
double spatial_norm(const std::vector<double>& v);

// Euclidean distance in coordinates; the auxiliary Riemannian metric.
double euclidean_distance(const SpacetimePoint& a, const SpacetimePoint& b);

// Classification of y relative to x. Pairs with
// |Δt − |Δx|| ≤ null_tolerance·(1 + |Δt|) count as null.
// Throws std::invalid_argument on dimension mismatch.
CausalClass classify(const SpacetimePoint& x, const SpacetimePoint& y,
                     double null_tolerance = kDefaultNullTolerance);

// Time separation: √(Δt² − |Δx|²) on J⁺, 0 otherwise (null pairs give 0).
double lorentz_distance(const SpacetimePoint& x, const SpacetimePoint& y,
                        double null_tolerance = kDefaultNullTolerance);

// c(x,y) = −d(x,y)^p if y ∈ J⁺(x), +∞ otherwise.
ExtendedReal cost(const SpacetimePoint& x, const SpacetimePoint& y,
                  const CostParams& params);

// c_t(x,y) = −t^{1−p} d(x,y)^p on J⁺ for t > 0; c_0(x,x) = 0 and
// c_0(x,y) = +∞ for x ≠ y. Throws std::invalid_argument for t < 0.
ExtendedReal cost_t(double t, const SpacetimePoint& x, const SpacetimePoint& y,
                    const CostParams& params);

// x + s(y − x). Throws std::invalid_argument unless y ∈ J⁺(x).
SpacetimePoint geodesic_point(const SpacetimePoint& x, const SpacetimePoint& y,
                              double s,
                              double null_tolerance = kDefaultNullTolerance);

// Affine combination without the causality precondition.
SpacetimePoint lerp(const SpacetimePoint& x, const SpacetimePoint& y, double s);

TangentVector displacement(const SpacetimePoint& from, const SpacetimePoint& to);
SpacetimePoint translate(const SpacetimePoint& x, const TangentVector& v);

// Lorentzian norm √(dt² − |dx|²) of a causal vector (0 on the cone).
double lorentz_norm(const TangentVector& v);

// ⟨q, v⟩ = pt·dt + Σ px·dx.
double pairing(const Covector& q, const TangentVector& v);

CausalClass classify_vector(const TangentVector& v,
                            double null_tolerance = kDefaultNullTolerance);

// −q_t > |q_x|: interior of the dual cone of future causal vectors.
bool in_dual_cone_interior(const Covector& q);

// L(v) = −|v|_g^p for causal v (dt ≥ 0, 0 included), +∞ otherwise.
ExtendedReal lagrangian(const TangentVector& v, const CostParams& params);

// ∂L/∂v = p|v|_g^{p−2} v^♭ with ♭ = diag(−1, 1, …, 1).
// Throws std::domain_error unless v is strictly timelike and future.
Covector legendre(const TangentVector& v, const CostParams& params);

// Inverse of legendre on int(𝒞*). Throws std::domain_error outside it.
TangentVector legendre_inverse(const Covector& q, const CostParams& params);

// H(q) = (1 − p)|v|_g^p with v = legendre_inverse(q).
double hamiltonian(const Covector& q, const CostParams& params);

}  // namespace lot

#endif  // LORENTZ_OT_GEOMETRY_HPP_
