// Copyright 2026 The tclme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "tclme/algebra.hpp"
#include "tclme/bath.hpp"
#include "tclme/moments.hpp"
#include "tclme/tcl.hpp"

namespace {

using namespace tclme;

Mat sigma_z() {
  Mat m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Mat sigma_x() {
  Mat m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

SystemModel spin_boson() { return SystemModel(0.5 * sigma_z(), sigma_x()); }

std::shared_ptr<DiscreteBath> qubit_bath() {
  std::vector<BathMode> modes(2);
  modes[0] = {BathMode::Kind::qubit, 0.9, 0.8, 6};
  modes[1] = {BathMode::Kind::qubit, 1.3, 0.6, 6};
  return std::make_shared<DiscreteBath>(modes, 2.0);
}

BathCorrelation ohmic_correlation() {
  SpectralDensity j;
  j.eta = 0.3;
  j.cutoff = 2.0;
  return correlation_from_spectral_density(j, 0.0);
}

void bm_moment_table_order2(benchmark::State& state) {
  const SystemModel model = spin_boson();
  const GaussianBathMoments mom(ohmic_correlation());
  const TimeGrid grid(0.0, 0.02, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_moment_table(model, mom, 2, grid));
  }
}
BENCHMARK(bm_moment_table_order2)->Arg(50)->Arg(100)->Arg(200);

void bm_moment_table_order4(benchmark::State& state) {
  const SystemModel model = spin_boson();
  const GaussianBathMoments mom(ohmic_correlation());
  const TimeGrid grid(0.0, 0.02, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_moment_table(model, mom, 4, grid));
  }
}
BENCHMARK(bm_moment_table_order4)->Arg(20)->Arg(40)->Arg(60)
    ->Unit(benchmark::kMillisecond);

void bm_discrete_moment(benchmark::State& state) {
  const auto bath = qubit_bath();
  const DiscreteBathMoments mom(bath);
  const Sign sigmas[4] = {Sign::plus, Sign::minus, Sign::plus, Sign::plus};
  const double times[4] = {1.9, 1.3, 0.6, 0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mom.moment(sigmas, times));
  }
}
BENCHMARK(bm_discrete_moment);

void bm_pairings(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_pairings(n));
  }
}
BENCHMARK(bm_pairings)->Arg(6)->Arg(8)->Arg(10)->Arg(12);

void bm_propagate(benchmark::State& state) {
  const SystemModel model = spin_boson();
  const TimeGrid grid(0.0, 0.01, static_cast<int>(state.range(0)));
  const GeneratorSeries gs = tcl2_generator(model, ohmic_correlation(), grid);
  const std::vector<Mat> gen = gs.summed();
  SystemState rho0;
  rho0.rho = Mat::Constant(2, 2, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(gen, grid, rho0));
  }
}
BENCHMARK(bm_propagate)->Arg(200)->Arg(1000);

void bm_expm(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Mat a = Mat::Random(d, d);
  a = Cplx(0.0, -1.0) * (a + a.adjoint().eval());
  for (auto _ : state) {
    benchmark::DoNotOptimize(expm(a));
  }
}
BENCHMARK(bm_expm)->Arg(4)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
