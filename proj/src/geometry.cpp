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

#include "lorentz_ot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace lot {

std::string extended_to_string(ExtendedReal v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string_view to_string(CausalClass c) {
  switch (c) {
    case CausalClass::kStrictlyTimelikeFuture: return "StrictlyTimelikeFuture";
    case CausalClass::kNullFuture: return "NullFuture";
    case CausalClass::kSpacelike: return "Spacelike";
    case CausalClass::kNullPast: return "NullPast";
    case CausalClass::kStrictlyTimelikePast: return "StrictlyTimelikePast";
    case CausalClass::kCoincident: return "Coincident";
  }
  return "?";
}

CausalClass reversed(CausalClass c) {
  switch (c) {
    case CausalClass::kStrictlyTimelikeFuture: return CausalClass::kStrictlyTimelikePast;
    case CausalClass::kNullFuture: return CausalClass::kNullPast;
    case CausalClass::kNullPast: return CausalClass::kNullFuture;
    case CausalClass::kStrictlyTimelikePast: return CausalClass::kStrictlyTimelikeFuture;
    default: return c;
  }
}

CostParams::CostParams(double p, double null_tolerance)
    : p_(p), null_tolerance_(null_tolerance) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("cost exponent p must lie in (0,1), got " +
                                std::to_string(p));
  }
  if (!(null_tolerance >= 0.0)) {
    throw std::invalid_argument("null tolerance must be non-negative");
  }
}

double spatial_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double euclidean_distance(const SpacetimePoint& a, const SpacetimePoint& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("dimension mismatch");
  }
  double s = (b.t - a.t) * (b.t - a.t);
  for (std::size_t k = 0; k < a.x.size(); ++k) {
    s += (b.x[k] - a.x[k]) * (b.x[k] - a.x[k]);
  }
  return std::sqrt(s);
}

namespace {

double spatial_gap(const SpacetimePoint& x, const SpacetimePoint& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.x.size(); ++k) {
    const double d = y.x[k] - x.x[k];
    s += d * d;
  }
  return std::sqrt(s);
}

CausalClass classify_delta(double dt, double a, bool coincident, double tol) {
  if (coincident) return CausalClass::kCoincident;
  if (std::abs(std::abs(dt) - a) <= tol * (1.0 + std::abs(dt))) {
    if (dt > 0.0) return CausalClass::kNullFuture;
    if (dt < 0.0) return CausalClass::kNullPast;
    return CausalClass::kSpacelike;
  }
  if (dt > a) return CausalClass::kStrictlyTimelikeFuture;
  if (-dt > a) return CausalClass::kStrictlyTimelikePast;
  return CausalClass::kSpacelike;
}

// √(dt² − a²) computed as √((dt − a)(dt + a)).
double interval(double dt, double a) {
  const double prod = (dt - a) * (dt + a);
  return prod > 0.0 ? std::sqrt(prod) : 0.0;
}

}  // namespace

CausalClass classify(const SpacetimePoint& x, const SpacetimePoint& y,
                     double null_tolerance) {
  if (x.dimension() != y.dimension()) {
    throw std::invalid_argument("classify: dimension mismatch");
  }
  return classify_delta(y.t - x.t, spatial_gap(x, y), x == y, null_tolerance);
}

double lorentz_distance(const SpacetimePoint& x, const SpacetimePoint& y,
                        double null_tolerance) {
  const CausalClass c = classify(x, y, null_tolerance);
  if (c != CausalClass::kStrictlyTimelikeFuture) return 0.0;
  return interval(y.t - x.t, spatial_gap(x, y));
}

ExtendedReal cost(const SpacetimePoint& x, const SpacetimePoint& y,
                  const CostParams& params) {
  const CausalClass c = classify(x, y, params.null_tolerance());
  if (!is_causal_future(c)) return kInf;
  if (c != CausalClass::kStrictlyTimelikeFuture) return 0.0;
  return -std::pow(interval(y.t - x.t, spatial_gap(x, y)), params.p());
}

ExtendedReal cost_t(double t, const SpacetimePoint& x, const SpacetimePoint& y,
                    const CostParams& params) {
  if (!(t >= 0.0)) throw std::invalid_argument("cost_t: t must be >= 0");
  if (t == 0.0) return x == y ? 0.0 : kInf;
  const ExtendedReal c = cost(x, y, params);
  if (c == kInf || c == 0.0) return c;
  return std::pow(t, 1.0 - params.p()) * c;
}

SpacetimePoint lerp(const SpacetimePoint& x, const SpacetimePoint& y, double s) {
  if (x.dimension() != y.dimension()) {
    throw std::invalid_argument("lerp: dimension mismatch");
  }
  SpacetimePoint out(x.t + s * (y.t - x.t), x.x);
  for (std::size_t k = 0; k < x.x.size(); ++k) {
    out.x[k] = x.x[k] + s * (y.x[k] - x.x[k]);
  }
  return out;
}

SpacetimePoint geodesic_point(const SpacetimePoint& x, const SpacetimePoint& y,
                              double s, double null_tolerance) {
  if (!is_causal_future(classify(x, y, null_tolerance))) {
    throw std::invalid_argument("geodesic_point: endpoints are not causally related");
  }
  if (s == 0.0) return x;
  if (s == 1.0) return y;
  return lerp(x, y, s);
}

TangentVector displacement(const SpacetimePoint& from, const SpacetimePoint& to) {
  if (from.dimension() != to.dimension()) {
    throw std::invalid_argument("displacement: dimension mismatch");
  }
  TangentVector v{to.t - from.t, to.x};
  for (std::size_t k = 0; k < v.dx.size(); ++k) v.dx[k] -= from.x[k];
  return v;
}

SpacetimePoint translate(const SpacetimePoint& x, const TangentVector& v) {
  if (x.dimension() != v.dx.size()) {
    throw std::invalid_argument("translate: dimension mismatch");
  }
  SpacetimePoint out(x.t + v.dt, x.x);
  for (std::size_t k = 0; k < v.dx.size(); ++k) out.x[k] += v.dx[k];
  return out;
}

double lorentz_norm(const TangentVector& v) {
  return interval(v.dt, spatial_norm(v.dx));
}

double pairing(const Covector& q, const TangentVector& v) {
  if (q.px.size() != v.dx.size()) {
    throw std::invalid_argument("pairing: dimension mismatch");
  }
  double s = q.pt * v.dt;
  for (std::size_t k = 0; k < v.dx.size(); ++k) s += q.px[k] * v.dx[k];
  return s;
}

CausalClass classify_vector(const TangentVector& v, double null_tolerance) {
  const double a = spatial_norm(v.dx);
  return classify_delta(v.dt, a, v.dt == 0.0 && a == 0.0, null_tolerance);
}

bool in_dual_cone_interior(const Covector& q) {
  return -q.pt > spatial_norm(q.px);
}

ExtendedReal lagrangian(const TangentVector& v, const CostParams& params) {
  const CausalClass c = classify_vector(v, params.null_tolerance());
  if (!is_causal_future(c)) return kInf;
  if (c != CausalClass::kStrictlyTimelikeFuture) return 0.0;
  return -std::pow(lorentz_norm(v), params.p());
}

Covector legendre(const TangentVector& v, const CostParams& params) {
  const double a = spatial_norm(v.dx);
  if (!(v.dt > a)) {
    throw std::domain_error("legendre: vector is not strictly timelike future-directed");
  }
  const double norm = interval(v.dt, a);
  const double scale = params.p() * std::pow(norm, params.p() - 2.0);
  Covector q{-scale * v.dt, v.dx};
  for (double& c : q.px) c *= scale;
  return q;
}

TangentVector legendre_inverse(const Covector& q, const CostParams& params) {
  const double a = spatial_norm(q.px);
  if (!(-q.pt > a)) {
    throw std::domain_error("legendre_inverse: covector outside int(C*)");
  }
  const double p = params.p();
  const double qnorm = interval(-q.pt, a);
  const double vnorm = std::pow(qnorm / p, 1.0 / (p - 1.0));
  const double scale = p * std::pow(vnorm, p - 2.0);
  TangentVector v{-q.pt / scale, q.px};
  for (double& c : v.dx) c /= scale;
  return v;
}

double hamiltonian(const Covector& q, const CostParams& params) {
  const TangentVector v = legendre_inverse(q, params);
  return (1.0 - params.p()) * std::pow(lorentz_norm(v), params.p());
}

}  // namespace lot
