#include <benchmark/benchmark.h>

#include <random>

#include "cranklab/dissection.hpp"
#include "cranklab/identity_io.hpp"
#include "cranklab/verifier.hpp"

using namespace cranklab;

namespace {

IdentitySpec load(const char* name) {
  return load_identity_file(std::string(CRANKLAB_TESTDATA) + "/" + name).identities.at(0);
}

CycNum random_cyc(std::mt19937& rng, int p) {
  std::uniform_int_distribution<int> d(-50, 50);
  std::vector<Rat> c(p - 1);
  for (auto& x : c) x = d(rng);
  return CycNum::from_coords(p, c);
}

void BM_CycMul(benchmark::State& st) {
  const int p = static_cast<int>(st.range(0));
  std::mt19937 rng(1);
  CycNum a = random_cyc(rng, p), b = random_cyc(rng, p);
  for (auto _ : st) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_CycMul)->Arg(13)->Arg(19)->Arg(31);

void BM_CycInv(benchmark::State& st) {
  std::mt19937 rng(2);
  CycNum a = random_cyc(rng, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(a.inv());
}
BENCHMARK(BM_CycInv)->Arg(13)->Arg(19);

void BM_ProductSeries(benchmark::State& st) {
  auto s = load("k13_0.json");
  EtaProduct F = term_product(s, s.terms.at(0));
  const Rat trunc(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(product_series(F, trunc, 13));
}
BENCHMARK(BM_ProductSeries)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_KCombinatorial(benchmark::State& st) {
  const int p = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(K_combinatorial(p, 1, 1, st.range(1)));
}
BENCHMARK(BM_KCombinatorial)->Args({13, 50})->Args({19, 80})->Unit(benchmark::kMillisecond);

void BM_KModular(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(K_modular(13, 1, 1, st.range(0)));
}
BENCHMARK(BM_KModular)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Certificate(benchmark::State& st) {
  auto s = load("k13_2.json");
  for (auto _ : st) benchmark::DoNotOptimize(valence_certificate(s));
}
BENCHMARK(BM_Certificate)->Unit(benchmark::kMillisecond);

void BM_OrdTable(benchmark::State& st) {
  auto s = load("k13_0.json");
  for (auto _ : st) benchmark::DoNotOptimize(ord_table(s));
}
BENCHMARK(BM_OrdTable)->Unit(benchmark::kMicrosecond);

void BM_Fit(benchmark::State& st) {
  auto truth = load("k13_0.json");
  for (auto _ : st) {
    IdentitySpec s = truth;
    for (auto& t : s.terms) t.coeff.reset();
    benchmark::DoNotOptimize(fit_spec(s, Rat(40)));
  }
}
BENCHMARK(BM_Fit)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
