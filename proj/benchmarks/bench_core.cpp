#include <benchmark/benchmark.h>

#include <random>

#include "aniso/config.hpp"
#include "aniso/exponents.hpp"
#include "aniso/nonlinearity.hpp"
#include "aniso/oracles.hpp"
#include "aniso/solver.hpp"

using namespace aniso;

static void BM_Classify(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<ProblemSpec> specs;
  for (int i = 0; i < 256; ++i) specs.push_back(oracle::random_admissible_spec(rng));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& s = specs[i++ % specs.size()];
    const auto base = compute_base_exponents(s);
    const auto sets = classify_indices(s, base);
    benchmark::DoNotOptimize(check_condition_m(s, sets, base).holds);
  }
}
BENCHMARK(BM_Classify);

static void BM_EvalH(benchmark::State& state) {
  const auto spec = make_problem({1.6, 1.9}, {0.6, 0.8}, {1.5, 1.2}, {0, 0}, 4);
  const auto params = make_regularization(spec, 64);
  double t = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_H(0, t, 2.0, params, spec));
    t = t < 10.0 ? t * 1.001 : 0.01;
  }
}
BENCHMARK(BM_EvalH);

static void BM_PairingA(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g({1.0, 1.0}, {n, n});
  const auto u = sine_profile(g);
  const std::vector<double> p{1.6, 1.9};
  for (auto _ : state) benchmark::DoNotOptimize(pairing_A(u, u, p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_PairingA)->Arg(32)->Arg(128)->Arg(512);

static void BM_Solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g({1.0, 1.0}, {n, n});
  auto spec = make_problem({1.6, 1.9}, {0.6, 0.8}, {1.5, 1.2}, {0, 0}, 4);
  spec.b_exp = 0.5;
  spec.s_exp = 2;
  OperatorBSpec b = zero_operator(g);
  b.F = node_preset(g, "bump:200", ".", "F");
  b.psi = psi_preset("saturating:0.5", "psi");
  for (auto _ : state) benchmark::DoNotOptimize(solve_regularized(spec, b, 16, g, SolverOptions{}).residual);
}
BENCHMARK(BM_Solve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
