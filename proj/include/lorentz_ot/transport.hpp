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

// Exact discrete transport for the causal cost.
//
// Forbidden (non-causal) arcs are left out of the network entirely. The
// primal solver is successive shortest paths with Dijkstra on reduced costs;
// its node potentials are returned as the dual pair. Optimality is certified
// independently by negative-cycle search on the exchange graph of the support.

#ifndef LORENTZ_OT_TRANSPORT_HPP_
#define LORENTZ_OT_TRANSPORT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lorentz_ot/geometry.hpp"
#include "lorentz_ot/measures.hpp"

namespace lot {

inline constexpr double kGapTolerance = 1e-9;
inline constexpr double kCycleTolerancePerEdge = 1e-9;

class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<ExtendedReal> values,
             std::vector<CausalClass> classes, CostParams params);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  ExtendedReal operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }
  bool finite(std::size_t i, std::size_t j) const { return (*this)(i, j) != kInf; }
  CausalClass causal_class(std::size_t i, std::size_t j) const {
    return classes_[i * cols_ + j];
  }
  const CostParams& params() const { return params_; }

 private:
  std::size_t rows_, cols_;
  std::vector<ExtendedReal> values_;
  std::vector<CausalClass> classes_;
  CostParams params_;
};

CostMatrix build_cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             const CostParams& params);

enum class TransportStatus { kOptimal, kInfeasibleNoCausalCoupling };

std::string_view to_string(TransportStatus s);

struct DualPair {
  std::vector<double> rows;  // φ on supp μ
  std::vector<double> cols;  // ψ on supp ν, with ψ_j − φ_i ≤ c_ij
};

struct TransportResult {
  TransportStatus status = TransportStatus::kInfeasibleNoCausalCoupling;
  Coupling coupling;
  double primal_value = kInf;
  std::optional<DualPair> duals;
};

// Index pair into a CostMatrix.
struct SupportPair {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const SupportPair&, const SupportPair&) = default;
};

std::vector<SupportPair> support_of(const Coupling& c);

// Minimum of Σ π_ij c_ij over couplings supported on finite arcs. The plan is
// reduced to a basic (forest) support. Throws std::invalid_argument when the
// matrix does not match the measures.
TransportResult solve_primal(const CostMatrix& matrix, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu);

enum class CertificateKind { kOptimalityGap, kMonotonicityCycle, kFeasibility };

std::string_view to_string(CertificateKind k);

struct Certificate {
  CertificateKind kind = CertificateKind::kFeasibility;
  std::optional<double> gap;
  // Indices into the support list passed to check_cyclical_monotonicity; the
  // cycle sends the target of cycle[k] to the source of cycle[k+1].
  std::optional<std::vector<std::size_t>> cycle;
  // Total cost change of the exchange along `cycle` (negative = improvement).
  std::optional<double> cycle_delta;
  // Feasibility: a coupling exists. Monotonicity: no violating cycle.
  bool feasible = false;
  double flow_value = 0.0;
};

// Negative-cycle search (Bellman-Ford) on the exchange graph: node a = support
// pair (x_a, y_a), edge a→b of weight c(x_b, y_a) − c(x_a, y_a) when finite.
// A cycle is reported only if its total weight is below
// −tolerance_per_edge·(cycle length). Throws std::invalid_argument if a
// support pair has infinite cost.
Certificate check_cyclical_monotonicity(
    std::span<const SupportPair> support, const CostMatrix& matrix,
    double tolerance_per_edge = kCycleTolerancePerEdge);

// Σ_k c(x_{k+1}, y_k) − c(x_k, y_k) along a cycle, indices into `support`.
double exchange_delta(std::span<const SupportPair> support,
                      std::span<const std::size_t> cycle, const CostMatrix& matrix);

// Max-flow over the arcs of J⁺ (resp. I⁺); feasible iff the flow carries the
// full unit mass.
Certificate causal_feasible(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            double null_tolerance = kDefaultNullTolerance);
Certificate strictly_timelike_feasible(const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu,
                                       double null_tolerance = kDefaultNullTolerance);

class DualInfeasibleError : public std::runtime_error {
 public:
  DualInfeasibleError(std::size_t i, std::size_t j, double violation);
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }
  double violation() const { return violation_; }

 private:
  std::size_t row_, col_;
  double violation_;
};

// primal_value − (Σ ψ ν − Σ φ μ). Checks ψ_j − φ_i ≤ c_ij + tolerance on every
// pair first and throws DualInfeasibleError for the worst violator.
// Throws std::invalid_argument for non-finite potentials or an infeasible
// result.
double dual_gap(std::span<const double> phi, std::span<const double> psi,
                const TransportResult& result, const CostMatrix& matrix,
                double tolerance = kGapTolerance);

// Σ mass·cost over the coupling entries.
double coupling_cost(const Coupling& c, const CostParams& params);

}  // namespace lot

#endif  // LORENTZ_OT_TRANSPORT_HPP_
