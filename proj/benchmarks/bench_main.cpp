#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "qres/counting.hpp"
#include "qres/dynamics.hpp"
#include "qres/model.hpp"
#include "qres/oracle.hpp"

using namespace qres;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi / 0.1;

void occupancy_square_wave(benchmark::State& state) {
  const SystemParams p{1.0, 0.05, 1.5};
  const auto d = DriveWaveform::square(1.0, 0.7, kTau);
  const auto times = linspace(0.0, 10 * kTau, 2001);
  for (auto _ : state) benchmark::DoNotOptimize(occupancy_trajectory(p, d, times, 1.0));
}
BENCHMARK(occupancy_square_wave)->Unit(benchmark::kMillisecond);

void cumulant_jets(benchmark::State& state) {
  const SystemParams p{1.0, 0.1, 4.0};
  const auto d = DriveWaveform::harmonic(1.0, 0.6, kTau);
  const auto times = linspace(0.0, 6 * kTau, 1201);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(propagate_jets(order, p, d, times, 2.0));
}
BENCHMARK(cumulant_jets)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void theta_grid_distribution(benchmark::State& state) {
  const SystemParams p{1.0, 0.1, 4.0};
  const auto d = DriveWaveform::harmonic(1.0, 0.6, kTau);
  const int m_max = static_cast<int>(state.range(0));
  CountingOptions opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(distribution_between(0.0, kTau, 2.0, m_max, p, d, opt));
}
BENCHMARK(theta_grid_distribution)->Arg(30)->Arg(150)->Unit(benchmark::kMillisecond);

void fock_generator_apply(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const SystemParams p{1.0, 0.1, 1.0};
  const auto L = build_tilted_generator(complex{0.0, 0.5}, 1.0, p, n_max);
  const auto rho = thermal_state(0.3, n_max).rho;
  ComplexVector out(rho.size());
  for (auto _ : state) {
    out.noalias() = L * rho;
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(fock_generator_apply)->Arg(20)->Arg(40)->Arg(80);

}  // namespace
BENCHMARK_MAIN();
