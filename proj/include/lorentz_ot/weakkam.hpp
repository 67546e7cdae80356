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

// Lax-Oleinik semigroups on finite carriers, dynamical couplings and
// displacement interpolation, calibrated pairs, and the sup-inf regularisation
// T̂_τ T_{s+τ} of a potential.
//
//   T_t u(y)  = inf_x u(x) + c_t(x,y)      (−∞ + ∞ := +∞)
//   T̂_s u(x) = sup_y u(y) − c_s(x,y)      (±∞ ∓ ∞ := −∞)

#ifndef LORENTZ_OT_WEAKKAM_HPP_
#define LORENTZ_OT_WEAKKAM_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "lorentz_ot/geometry.hpp"
#include "lorentz_ot/measures.hpp"

namespace lot {

struct ValueField {
  std::vector<SpacetimePoint> carrier;
  std::vector<ExtendedReal> values;
  double time = 0.0;
};

// Throws std::invalid_argument for t < 0 or a malformed field.
ValueField lax_forward(const ValueField& u, double t,
                       std::span<const SpacetimePoint> targets, const CostParams& params);
ValueField lax_backward(const ValueField& u, double s,
                        std::span<const SpacetimePoint> sources, const CostParams& params);

// Single-threaded references for the two kernels above.
namespace serial {
ValueField lax_forward(const ValueField& u, double t,
                       std::span<const SpacetimePoint> targets, const CostParams& params);
ValueField lax_backward(const ValueField& u, double s,
                        std::span<const SpacetimePoint> sources, const CostParams& params);
}  // namespace serial

// Coupling with the affine geodesic s ↦ x + s(y − x) attached to each entry.
class DynamicalCoupling {
 public:
  // Throws std::invalid_argument if an entry is not causal.
  explicit DynamicalCoupling(Coupling base,
                             double null_tolerance = kDefaultNullTolerance);

  const Coupling& base() const { return base_; }
  std::size_t size() const { return base_.entries.size(); }
  SpacetimePoint position(std::size_t entry, double s) const;

 private:
  Coupling base_;
};

struct Interpolation {
  DiscreteMeasure mu_s;
  DiscreteMeasure mu_t;
  Coupling pi_st;  // (e_s, e_t)_# of the dynamical coupling
};

// Throws std::invalid_argument unless 0 ≤ s < t ≤ 1.
Interpolation displacement_interpolate(const DynamicalCoupling& dyn, double s, double t);

struct CalibrationReport {
  // max over carrier pairs of ψ(y) − φ(x) − c_T(x,y) (≤ 0 for a subsolution).
  double max_subsolution_violation = -kInf;
  std::size_t violation_row = 0;
  std::size_t violation_col = 0;
  // max over coupling entries of |ψ(y) − φ(x) − c_T(x,y)|.
  double max_calibration_residual = 0.0;
  std::size_t residual_entry = 0;
};

// Coupling entry indices refer to phi.carrier (rows) and psi.carrier (cols).
// cost_time selects c_T; the default T = 1 is the plain cost.
CalibrationReport calibration_check(const ValueField& phi, const ValueField& psi,
                                    const Coupling& coupling, const CostParams& params,
                                    double cost_time = 1.0);

// max |T_t u(γ(t)) − T_s u(γ(s)) − c_{t−s}(γ(s),γ(t))| over entries of dyn and
// consecutive times s < t of `times`, with T_t evaluated from u's carrier.
double geodesic_calibration_residual(const ValueField& u, const DynamicalCoupling& dyn,
                                     std::span<const double> times,
                                     const CostParams& params);

// T̂_b(T_a u)(z) in 1+1 dimensions, a ≥ b > 0. The inner infimum is exact
// over u's finite carrier; the outer supremum runs over all w ∈ J⁺(z). When
// some branch x_k attains the inner infimum at w_k = x_k + a/(a−b)·(z − x_k)
// the value is exact (every branch is bounded by u_k + c_{a−b}(x_k,z));
// otherwise a trust-region sequential-LP ascent from the w_k is used.
ExtendedReal sup_inf_convolution(const ValueField& u, double a, double b,
                                 const SpacetimePoint& z, const CostParams& params);

struct RegularizedPair {
  ValueField phi_s;  // (t−s)^{−(1−p)} T̂_τ T_{s+τ} φ on carrier_s
  ValueField psi_t;  // (t−s)^{−(1−p)} T̂_τ T_{t+τ} φ on carrier_t
  double scale = 1.0;
};

// Throws std::invalid_argument unless 0 ≤ s < t ≤ 1 and
// 0 < τ ≤ min(t − s, 1 − t).
RegularizedPair regularized_pair(const ValueField& phi, double s, double t, double tau,
                                 std::span<const SpacetimePoint> carrier_s,
                                 std::span<const SpacetimePoint> carrier_t,
                                 const CostParams& params);

// One side of the pair: scale · T̂_τ T_{r+τ} φ on the carrier.
ValueField regularized_side(const ValueField& phi, double r, double tau, double scale,
                            std::span<const SpacetimePoint> carrier,
                            const CostParams& params);

}  // namespace lot

#endif  // LORENTZ_OT_WEAKKAM_HPP_
