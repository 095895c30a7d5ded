#include <benchmark/benchmark.h>

#include "fracldg/riesz_pair.hpp"

namespace {

using fracldg::Point;
using fracldg::Triangle;

const Triangle kRef{Point(0, 0), Point(1, 0), Point(0, 1)};

void run_pair(benchmark::State& state, const Triangle& other) {
  const auto quad = fracldg::PairQuadrature::uniform(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fracldg::riesz_pair_2d(kRef, other, 0.75, quad));
}

void BM_PairIdentical(benchmark::State& state) { run_pair(state, kRef); }
void BM_PairSharedEdge(benchmark::State& state) { run_pair(state, {Point(1, 0), Point(0, 1), Point(1, 1)}); }
void BM_PairSharedVertex(benchmark::State& state) { run_pair(state, {Point(0, 0), Point(-1, 0), Point(0, -1)}); }
void BM_PairDisjoint(benchmark::State& state) { run_pair(state, {Point(3, 0), Point(4, 0), Point(3, 1)}); }

void BM_Pair1d(benchmark::State& state) {
  double a = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fracldg::riesz_pair_1d(a, a + 0.1, 0.35, 0.4, 0.7));
    a = a > 0.2 ? 0.0 : a + 1e-3;
  }
}

BENCHMARK(BM_PairIdentical)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_PairSharedEdge)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_PairSharedVertex)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_PairDisjoint)->Arg(3)->Arg(6);
BENCHMARK(BM_Pair1d);

}  // namespace
