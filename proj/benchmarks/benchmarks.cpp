#include <benchmark/benchmark.h>

#include <random>

#include "stiso/iso.hpp"
#include "stiso/semantics.hpp"
#include "stiso/symbolic.hpp"

using namespace stiso;

namespace {

TypePtr random_type(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 4 == 0) return tend();
  Base bases[] = {Base::Unit, Base::Bool, Base::Int};
  switch (rng() % 4) {
    case 0: return tout(bases[rng() % 3], random_type(rng, depth - 1));
    case 1: return tin(bases[rng() % 3], random_type(rng, depth - 1));
    case 2:
      return tselect(random_type(rng, depth - 1), random_type(rng, depth - 1));
    default:
      return tbranch(random_type(rng, depth - 1), random_type(rng, depth - 1));
  }
}

void BM_normalize(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<TypePtr> ts;
  for (int i = 0; i < 64; ++i)
    ts.push_back(random_type(rng, static_cast<int>(state.range(0))));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize(ts[i++ % ts.size()]).nf);
  }
}
BENCHMARK(BM_normalize)->Arg(3)->Arg(5)->Arg(7);

void BM_synthesize(benchmark::State& state) {
  TypePtr t = parse_type("!int.!bool.end"), s = parse_type("!bool.!int.end");
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(t, s));
}
BENCHMARK(BM_synthesize);

void BM_prove_identity(benchmark::State& state) {
  TypePtr t = parse_type("!int.!bool.end"), s = parse_type("!bool.!int.end");
  AdapterPair ap = axiom_adapters(1, t, s);
  ProcPtr composed = ppar(ap.forward, ap.backward);
  for (auto _ : state)
    benchmark::DoNotOptimize(prove_identity(composed, t, 20000, 200).status);
}
BENCHMARK(BM_prove_identity);

void BM_is_correct(benchmark::State& state) {
  std::vector<ProcPtr> ps;
  for (std::uint64_t seed = 0; seed < 32; ++seed)
    ps.push_back(generate_typed({tend(), tend()}, seed,
                                static_cast<std::size_t>(state.range(0))));
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(is_correct(ps[i++ % ps.size()]).correct);
}
BENCHMARK(BM_is_correct)->Arg(8)->Arg(16);

void BM_oracle_iso(benchmark::State& state) {
  TypePtr t = parse_type("!int.!bool.end"), s = parse_type("!bool.!int.end");
  for (auto _ : state) benchmark::DoNotOptimize(oracle_iso(t, s, 12));
}
BENCHMARK(BM_oracle_iso);

}  // namespace

BENCHMARK_MAIN();
