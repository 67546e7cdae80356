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

// OpenMP kernels against their serial references.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "lorentz_ot/potentials.hpp"
#include "lorentz_ot/weakkam.hpp"

namespace {

using namespace lot;

std::vector<SpacetimePoint> cloud(std::size_t n, double t_lo, double t_hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-1, 1), ut(t_lo, t_hi);
  std::vector<SpacetimePoint> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) pts.push_back(point_xt(ux(rng), ut(rng)));
  return pts;
}

PotentialField field(std::size_t n) {
  PotentialField f;
  f.domain = cloud(n, -1, 0, 1);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t k = 0; k < n; ++k) f.values.push_back(u(rng));
  return f;
}

template <bool kParallel>
void BM_CTransform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto phi = field(n);
  const auto targets = cloud(n, 1, 2, 3);
  const CostParams params(0.5);
  for (auto _ : state) {
    auto psi = kParallel ? c_transform(phi, targets, params)
                         : serial::c_transform(phi, targets, params);
    benchmark::DoNotOptimize(psi.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

template <bool kParallel>
void BM_LaxForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = field(n);
  const ValueField u{f.domain, f.values, 0.0};
  const auto targets = cloud(n, 0, 1, 4);
  const CostParams params(0.5);
  for (auto _ : state) {
    auto v = kParallel ? lax_forward(u, 1.0, targets, params)
                       : serial::lax_forward(u, 1.0, targets, params);
    benchmark::DoNotOptimize(v.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

BENCHMARK(BM_CTransform<true>)->Name("c_transform/openmp")->Arg(500)->Arg(2000);
BENCHMARK(BM_CTransform<false>)->Name("c_transform/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_LaxForward<true>)->Name("lax_forward/openmp")->Arg(500)->Arg(2000);
BENCHMARK(BM_LaxForward<false>)->Name("lax_forward/serial")->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
