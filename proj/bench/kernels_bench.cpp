#include <benchmark/benchmark.h>

#include <random>

#include "fchv/initial_data.hpp"
#include "fchv/kernels.hpp"
#include "fchv/time_integrator.hpp"

using namespace fchv;

namespace {

struct Spectrum {
  GridPtr grid;
  std::vector<ComplexBuffer> comps;
  std::vector<double> table;

  explicit Spectrum(int n) : grid(SpectralGrid::create(2, n, 6.283185307179586)) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    for (int c = 0; c < 2; ++c) {
      ComplexBuffer b(grid->spectral_size());
      for (auto& x : b) x = {normal(rng), normal(rng)};
      comps.push_back(std::move(b));
    }
    table.resize(grid->spectral_size());
    for (std::size_t s = 0; s < table.size(); ++s) table[s] = 1.0 / (1.0 + grid->k_squared()[s]);
  }
  std::vector<kernels::ComplexSpan> spans() { return {comps[0], comps[1]}; }
  std::vector<kernels::ConstComplexSpan> const_spans() const { return {comps[0], comps[1]}; }
};

template <bool Parallel>
void project(benchmark::State& state) {
  Spectrum s(static_cast<int>(state.range(0)));
  auto spans = s.spans();
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::parallel::leray_project(*s.grid, spans);
    else
      kernels::reference::leray_project(*s.grid, spans);
    benchmark::ClobberMemory();
  }
}

template <bool Parallel>
void energy(benchmark::State& state) {
  Spectrum s(static_cast<int>(state.range(0)));
  const auto spans = s.const_spans();
  for (auto _ : state) {
    double e = Parallel ? kernels::parallel::weighted_energy(*s.grid, spans, s.table)
                        : kernels::reference::weighted_energy(*s.grid, spans, s.table);
    benchmark::DoNotOptimize(e);
  }
}

template <bool Parallel>
void derivative(benchmark::State& state) {
  Spectrum s(static_cast<int>(state.range(0)));
  ComplexBuffer out(s.grid->spectral_size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::parallel::derivative(*s.grid, 0, s.comps[0], out);
    else
      kernels::reference::derivative(*s.grid, 0, s.comps[0], out);
    benchmark::ClobberMemory();
  }
}

void stepper(benchmark::State& state) {
  auto grid = SpectralGrid::create(2, static_cast<int>(state.range(0)), 6.283185307179586);
  SolverParams p;
  p.nu = 0.05;
  p.alpha = 0.1;
  const Stepper stepper(grid, p);
  SimState s = make_initial_state(band_random(grid, 1, 1.0, 8.0, 1.0), p);
  for (auto _ : state) s = stepper.step(s);
}

}  // namespace

BENCHMARK(project<true>)->Name("leray_project/parallel")->Arg(128)->Arg(512);
BENCHMARK(project<false>)->Name("leray_project/reference")->Arg(128)->Arg(512);
BENCHMARK(energy<true>)->Name("weighted_energy/parallel")->Arg(128)->Arg(512);
BENCHMARK(energy<false>)->Name("weighted_energy/reference")->Arg(128)->Arg(512);
BENCHMARK(derivative<true>)->Name("derivative/parallel")->Arg(128)->Arg(512);
BENCHMARK(derivative<false>)->Name("derivative/reference")->Arg(128)->Arg(512);
BENCHMARK(stepper)->Name("ifrk4_step")->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
