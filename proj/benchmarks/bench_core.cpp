// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ssflab/harness.hpp"
#include "ssflab/rng.hpp"

namespace {

using namespace ssflab;

PerturbationPair make_pair(int dim) {
  Rng rh(17, 1), rv(17, 2);
  Matrix h = random_hermitian(rh, dim);
  Matrix v = random_hermitian(rv, dim);
  v *= 1.0 / v.norm();
  return PerturbationPair(make_self_adjoint(h), make_self_adjoint(v));
}

void BM_Eigendecompose(benchmark::State& state) {
  const PerturbationPair pair = make_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigendecompose(pair.h0()));
  }
}
BENCHMARK(BM_Eigendecompose)->Arg(50)->Arg(100)->Arg(200);

void BM_KoplienkoEta(benchmark::State& state) {
  const PerturbationPair pair = make_pair(static_cast<int>(state.range(0)));
  const int s_nodes = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(koplienko_eta(pair, s_nodes));
  }
}
BENCHMARK(BM_KoplienkoEta)->Args({50, 8})->Args({50, 32})->Args({150, 32});

void BM_FrechetExpDoi(benchmark::State& state) {
  const PerturbationPair pair = make_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(frechet_exp(pair.h0(), pair.v(), 5.0));
  }
}
BENCHMARK(BM_FrechetExpDoi)->Arg(30)->Arg(100);

void BM_DoiKernelApply(benchmark::State& state) {
  const PerturbationPair pair = make_pair(static_cast<int>(state.range(0)));
  const SpectralDecomposition d = eigendecompose(pair.h0());
  const FunctionSpec f = FunctionSpec::exponential(3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        doi_divided_difference(d, d, f, pair.v().entries()));
  }
}
BENCHMARK(BM_DoiKernelApply)->Arg(30)->Arg(100);

void BM_WvnProjection(benchmark::State& state) {
  Scenario sc;
  sc.seed = 23;
  sc.ambient_dim = static_cast<int>(state.range(0));
  sc.v_spec.kind = VSpec::Kind::rank_r;
  sc.v_spec.rank = 2;
  const PerturbationPair pair = build_pair(sc);
  WvnOptions options;
  options.t_grid_points = 9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wvn_pair_projection(pair, 0.1, 1.0, options));
  }
}
BENCHMARK(BM_WvnProjection)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
