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

#ifndef LORENTZ_OT_EXTENDED_REAL_HPP_
#define LORENTZ_OT_EXTENDED_REAL_HPP_

#include <cmath>
#include <limits>
#include <string>

namespace lot {

// Values in R ∪ {+∞, −∞} are carried as IEEE doubles. NaN never appears in a
// valid field: the two helpers below decide the indeterminate sum ∞ − ∞ for
// the context it occurs in.
using ExtendedReal = double;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_finite(ExtendedReal v) { return std::isfinite(v); }

// Sum used inside infima (c-transform, forward Lax-Oleinik): −∞ + ∞ := +∞.
inline ExtendedReal add_for_inf(ExtendedReal a, ExtendedReal b) {
  if ((a == kInf && b == -kInf) || (a == -kInf && b == kInf)) return kInf;
  return a + b;
}

// Sum used inside suprema (c-convex envelopes, backward Lax-Oleinik):
// ±∞ ∓ ∞ := −∞.
inline ExtendedReal add_for_sup(ExtendedReal a, ExtendedReal b) {
  if ((a == kInf && b == -kInf) || (a == -kInf && b == kInf)) return -kInf;
  return a + b;
}

inline ExtendedReal sub_for_inf(ExtendedReal a, ExtendedReal b) {
  return add_for_inf(a, -b);
}

inline ExtendedReal sub_for_sup(ExtendedReal a, ExtendedReal b) {
  return add_for_sup(a, -b);
}

// "inf" / "-inf" sentinels used by the JSON schemas.
std::string extended_to_string(ExtendedReal v);

}  // namespace lot

#endif  // LORENTZ_OT_EXTENDED_REAL_HPP_
