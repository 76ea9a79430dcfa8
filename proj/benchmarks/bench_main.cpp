#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <vector>

#include "cseq/simplex.hpp"
#include "cseq/wealth.hpp"
#include "cseq/wor.hpp"

namespace {

using namespace cseq;

ProbVector random_point(std::size_t k, std::mt19937_64& rng) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> x(k);
  double s = 0.0;
  for (auto& v : x) s += (v = g(rng));
  for (auto& v : x) v /= s;
  return ProbVector(x);
}

// One UP step at horizon t: the table grows to |G_{K,t}| entries.
void BM_UpAbsorb(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto t = state.range(1);
  std::mt19937_64 rng(1);
  UpState base(k, DirichletPrior::jeffreys(k));
  for (std::int64_t i = 0; i < t; ++i) base.absorb(random_point(k, rng));
  const ProbVector y = random_point(k, rng);
  for (auto _ : state) benchmark::DoNotOptimize(up_absorb(base, y));
}
BENCHMARK(BM_UpAbsorb)->Args({3, 100})->Args({4, 50})->Args({4, 100})->Unit(benchmark::kMicrosecond);

void BM_UpEvaluate(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  UpState s(k, DirichletPrior::jeffreys(k));
  for (std::int64_t i = 0; i < state.range(1); ++i) s.absorb(random_point(k, rng));
  const UpWealthEvaluator eval(s);
  const ProbVector m = random_point(k, rng);
  for (auto _ : state) benchmark::DoNotOptimize(eval(m));
}
BENCHMARK(BM_UpEvaluate)->Args({3, 100})->Args({4, 100})->Unit(benchmark::kMicrosecond);

void BM_KtWealth(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const std::vector<double> counts = {40, 35, 25};
  const ProbVector m = random_point(3, rng);
  const auto prior = DirichletPrior::jeffreys(3);
  for (auto _ : state) benchmark::DoNotOptimize(kt_log_wealth(counts, m, prior));
}
BENCHMARK(BM_KtWealth);

void BM_GridRank(benchmark::State& state) {
  const GridIndex index(4, 100);
  const CountVector c({10, 20, 30, 40});
  for (auto _ : state) benchmark::DoNotOptimize(index.rank(c));
}
BENCHMARK(BM_GridRank);

// A full audit pass over a shuffled census of size N.
void BM_AuditPass(benchmark::State& state) {
  const auto method = static_cast<WorMethod>(state.range(0));
  const std::vector<std::int64_t> census = {60, 25, 15};
  std::vector<std::size_t> urn;
  for (std::size_t j = 0; j < census.size(); ++j) urn.insert(urn.end(), static_cast<std::size_t>(census[j]), j);
  std::mt19937_64 rng(4);
  std::shuffle(urn.begin(), urn.end(), rng);
  for (auto _ : state) {
    AuditState s(100, 3, method, 0.05);
    for (std::size_t t = 0; t + 1 < urn.size(); ++t) s.absorb(urn[t]);
    benchmark::DoNotOptimize(s.active_count());
  }
}
BENCHMARK(BM_AuditPass)
    ->Arg(static_cast<int>(WorMethod::kWorKt))
    ->Arg(static_cast<int>(WorMethod::kPpr))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
