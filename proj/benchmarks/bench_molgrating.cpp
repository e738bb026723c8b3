#include <benchmark/benchmark.h>

#include <complex>
#include <cmath>
#include <vector>

#include "molgrating/beamline.hpp"
#include "molgrating/bessel.hpp"
#include "molgrating/fresnel.hpp"
#include "molgrating/spectrum.hpp"

using namespace molgrating;

namespace {

MoleculeSpecies c60() { return *find_builtin_species("C60"); }

GratingBeam beam_at(double power) {
  GratingBeam b;
  b.power_per_wave = power;
  return b;
}

void BM_BesselJ(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_j(order, x));
    x = x < 20.0 ? x + 0.37 : 0.1;
  }
}
BENCHMARK(BM_BesselJ)->Arg(0)->Arg(5)->Arg(30);

void BM_IncoherentOrders(benchmark::State& state) {
  const auto phi = compute_phi(c60(), beam_at(static_cast<double>(state.range(0))), 120.0);
  for (auto _ : state) benchmark::DoNotOptimize(incoherent_order_intensities(phi));
}
BENCHMARK(BM_IncoherentOrders)->Arg(1)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_AveragedOrders(benchmark::State& state) {
  ExperimentSetup s;
  s.beam.power_per_wave = 9.5;
  for (auto _ : state) benchmark::DoNotOptimize(averaged_order_intensities(s));
}
BENCHMARK(BM_AveragedOrders)->Unit(benchmark::kMillisecond);

void BM_FresnelPropagate(benchmark::State& state) {
  const double lambda = de_broglie_wavelength(c60(), 120.0);
  SampledField field{GridSpec::centered(514.5e-9, 40, static_cast<std::size_t>(state.range(0))), {}};
  for (std::size_t k = 0; k < field.grid.samples; ++k) {
    const double x = field.grid.position(k);
    field.values.push_back(std::polar(std::exp(-x * x / 5.76e-12), 3e5 * x));
  }
  const auto out = DetectorGrid::symmetric(150e-6, 2e-6);
  const FresnelPropagator propagator(field.grid, lambda, 1.2, out);
  for (auto _ : state) benchmark::DoNotOptimize(propagator.apply(field.values));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(field.grid.samples));
}
BENCHMARK(BM_FresnelPropagate)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_EnsemblePattern(benchmark::State& state) {
  ExperimentSetup s;
  s.beam.power_per_wave = 9.5;
  s.mode = state.range(0) == 0 ? SimulationMode::orders : SimulationMode::wave;
  s.numerics.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_pattern(s));
}
BENCHMARK(BM_EnsemblePattern)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
