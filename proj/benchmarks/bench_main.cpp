#include <random>

#include <benchmark/benchmark.h>

#include "miflab/coset_table.hpp"
#include "miflab/finite_group.hpp"
#include "miflab/grigorchuk.hpp"
#include "miflab/identity_lab.hpp"
#include "miflab/limit_group.hpp"
#include "miflab/mif_search.hpp"
#include "miflab/presentation.hpp"

using namespace miflab;

namespace {

void BM_EnumerateDefaultWindow(benchmark::State& state) {
  const auto width = state.range(0);
  auto pres = build_window_presentation(2, CSequence::identity(), Window(0, width));
  for (auto _ : state) {
    auto table = enumerate_cosets(pres);
    benchmark::DoNotOptimize(table.coset_count());
  }
  state.counters["order"] = static_cast<double>(enumerate_cosets(pres).coset_count());
}
BENCHMARK(BM_EnumerateDefaultWindow)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_EnumerateFelsch(benchmark::State& state) {
  auto pres = build_window_presentation(2, CSequence::identity(), Window(0, 3));
  EnumerationOptions opts;
  opts.strategy = EnumerationStrategy::Felsch;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_cosets(pres, opts).coset_count());
}
BENCHMARK(BM_EnumerateFelsch)->Unit(benchmark::kMillisecond);

void BM_EnumerateOddPrime(benchmark::State& state) {
  auto pres = build_window_presentation(static_cast<int>(state.range(0)), CSequence::constant(2), Window(0, 1));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_cosets(pres).coset_count());
}
BENCHMARK(BM_EnumerateOddPrime)->Arg(3)->Arg(5)->Arg(7);

void BM_LimitGroupWordProblem(benchmark::State& state) {
  LimitGroup G{Instance{}};
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> idx(0, 3);
  std::vector<GElement> elems;
  for (int i = 0; i < 256; ++i) {
    std::vector<ALetter> letters;
    for (int n = 0; n < 12; ++n) letters.push_back({idx(rng), 1});
    elems.push_back(G.from_aword(AWord(letters, 2)));
  }
  G.is_trivial(elems[0]);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& g = elems[i++ % elems.size()];
    benchmark::DoNotOptimize(G.is_trivial(G.multiply(g, elems[i % elems.size()])));
  }
}
BENCHMARK(BM_LimitGroupWordProblem);

void BM_GrigorchukSolver(benchmark::State& state) {
  auto words = grig::reduced_words(static_cast<int>(state.range(0)));
  for (auto _ : state)
    for (const auto& w : words) benchmark::DoNotOptimize(grig::is_trivial(w));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * words.size()));
}
BENCHMARK(BM_GrigorchukSolver)->Arg(8)->Arg(12)->Arg(16);

void BM_GrigorchukIdentity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(grig::verify_identity(static_cast<int>(state.range(0))).checked);
}
BENCHMARK(BM_GrigorchukIdentity)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_DirectProductIdentity(benchmark::State& state) {
  auto a = symmetric_group(3), b = dihedral_group(4);
  IdentityOptions opts;
  opts.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_direct_product_identity(a, b, opts).pairs);
}
BENCHMARK(BM_DirectProductIdentity)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Drive(benchmark::State& state) {
  LimitGroup G{Instance{}};
  const auto threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(drive(G, static_cast<std::size_t>(state.range(0)), {}, threads).certificates.size());
}
BENCHMARK(BM_Drive)->Args({50, 1})->Args({50, 8})->Args({200, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
