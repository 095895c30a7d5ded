#include <benchmark/benchmark.h>

#include "fracldg/assembly.hpp"
#include "fracldg/mesh.hpp"
#include "fracldg/solver.hpp"

namespace {

const fracldg::ScalarField kOne = [](const fracldg::Point&) { return 1.0; };

void BM_AssembleA_Disk(benchmark::State& state) {
  const fracldg::Mesh mesh = fracldg::disk_mesh(static_cast<int>(state.range(0)), 2.0);
  const fracldg::DgSpaces spaces(mesh, fracldg::QSpace::p1);
  for (auto _ : state) benchmark::DoNotOptimize(fracldg::assemble_A(spaces, 0.75).scalar.data());
  state.counters["elements"] = mesh.num_elements();
}

void BM_Solve_Disk(benchmark::State& state) {
  const fracldg::Mesh mesh = fracldg::disk_mesh(static_cast<int>(state.range(0)), 2.0);
  const fracldg::DgSpaces spaces(mesh, fracldg::QSpace::p1);
  fracldg::FluxParams flux;
  flux.cs_rule = fracldg::FluxParams::CsRule::constant;
  const fracldg::SystemBlocks blocks = fracldg::assemble_system(spaces, flux, kOne);
  for (auto _ : state) benchmark::DoNotOptimize(fracldg::solve(blocks).U.data());
  state.counters["N"] = spaces.v_size();
}

void BM_Solve_GradedInterval(benchmark::State& state) {
  const fracldg::Mesh mesh = fracldg::graded_interval_mesh(static_cast<int>(state.range(0)), 2.5);
  const fracldg::DgSpaces spaces(mesh, fracldg::QSpace::p1);
  const fracldg::SystemBlocks blocks = fracldg::assemble_system(spaces, fracldg::FluxParams{}, kOne);
  for (auto _ : state) benchmark::DoNotOptimize(fracldg::solve(blocks).U.data());
}

BENCHMARK(BM_AssembleA_Disk)->Arg(4)->Arg(7)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve_Disk)->Arg(4)->Arg(7)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve_GradedInterval)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
