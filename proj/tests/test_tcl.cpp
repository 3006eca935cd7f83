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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <random>

#include "helpers.hpp"
#include "tclme/bath.hpp"
#include "tclme/moments.hpp"
#include "tclme/tcl.hpp"

using namespace tclme;
using namespace tclme::testing;

namespace {

std::vector<MomentSeries> random_moment_table(std::mt19937_64& rng, int n_max,
                                              int n_pts, int dim) {
  std::vector<MomentSeries> table(n_max);
  for (int n = 1; n <= n_max; ++n) {
    MomentSeries& ms = table[n - 1];
    ms.order = n;
    ms.m.reserve(n_pts);
    ms.mdot.reserve(n_pts);
    for (int k = 0; k < n_pts; ++k) {
      ms.m.push_back(random_matrix(rng, dim * dim, dim * dim));
      ms.mdot.push_back(random_matrix(rng, dim * dim, dim * dim));
    }
  }
  return table;
}

struct SpinBosonFixture {
  SystemModel model{Mat(), Mat()};
  std::shared_ptr<DiscreteBath> bath;
  std::unique_ptr<DiscreteBathMoments> moments;
  TimeGrid grid{0.0, 0.05, 30};

  SpinBosonFixture()
      : model(0.5 * pauli_z(), pauli_x()) {
    std::vector<BathMode> modes(2);
    modes[0] = {BathMode::Kind::qubit, 0.9, 0.8, 6};
    modes[1] = {BathMode::Kind::qubit, 1.3, 0.6, 6};
    bath = std::make_shared<DiscreteBath>(modes, 2.0);
    moments = std::make_unique<DiscreteBathMoments>(bath);
  }
};

GeneratorSeries dephasing_tcl2(double eta, double cutoff, const TimeGrid& grid) {
  SpectralDensity j;
  j.eta = eta;
  j.cutoff = cutoff;
  const SystemModel model(0.5 * pauli_z(), pauli_z());
  return tcl2_generator(model, correlation_from_spectral_density(j, 0.0), grid);
}

}  // namespace

TEST_CASE("composition enumeration: counts, order, signs") {
  for (int n = 1; n <= 12; ++n) {
    const auto comps = enumerate_compositions(n);
    CHECK(comps.size() == (1u << (n - 1)));
    // Leading term is the plain (n); trailing term is all ones.
    CHECK(comps.front().parts == std::vector<int>{n});
    CHECK(comps.back().parts == std::vector<int>(n, 1));
    long signed_sum = 0;
    for (const Composition& c : comps) {
      int total = 0;
      for (int p : c.parts) total += p;
      CHECK(total == n);
      CHECK(c.sign == (c.parts.size() % 2 == 1 ? 1 : -1));
      signed_sum += c.sign;
    }
    // Alternating sum over compositions vanishes for n >= 2.
    CHECK(signed_sum == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("order three composition signs follow (+,-,-,+)") {
  const auto comps = enumerate_compositions(3);
  REQUIRE(comps.size() == 4);
  CHECK(comps[0].parts == std::vector<int>{3});
  CHECK(comps[1].parts == std::vector<int>{2, 1});
  CHECK(comps[2].parts == std::vector<int>{1, 2});
  CHECK(comps[3].parts == std::vector<int>{1, 1, 1});
  CHECK(comps[0].sign == 1);
  CHECK(comps[1].sign == -1);
  CHECK(comps[2].sign == -1);
  CHECK(comps[3].sign == 1);
}

TEST_CASE("recursion and composition expansion agree on random data") {
  std::mt19937_64 rng(101);
  const TimeGrid grid(0.0, 0.1, 9);
  const auto table = random_moment_table(rng, 6, grid.size(), 2);
  const GeneratorSeries gs = generator_via_recursion(table, 6, grid);
  for (int n = 1; n <= 6; ++n) {
    const auto direct = generator_via_compositions(table, n, grid);
    CHECK(max_diff(gs.orders.at(n), direct) < 1e-12);
  }
}

TEST_CASE("moment series vanish at the grid origin") {
  const SpinBosonFixture fx;
  const auto table = compute_moment_table(fx.model, *fx.moments, 4, fx.grid);
  for (const MomentSeries& ms : table) {
    CHECK(ms.m[0].norm() == 0.0);
    if (ms.order >= 2) CHECK(ms.mdot[0].norm() == 0.0);
  }
  // A zero-mean bath also kills the first-order derivative.
  CHECK(table[0].mdot[0].norm() == 0.0);
}

TEST_CASE("forcing the top vertex to the anticommutator channel kills everything") {
  const SpinBosonFixture fx;
  MomentOptions opts;
  opts.top_vertex_override = +1;
  const auto table = compute_moment_table(fx.model, *fx.moments, 4, fx.grid, opts);
  for (const MomentSeries& ms : table) {
    CHECK(max_norm(ms.m) < 1e-13);
    CHECK(max_norm(ms.mdot) < 1e-13);
  }
}

TEST_CASE("generator orders scale homogeneously with the coupling") {
  const SpinBosonFixture fx;
  const double lam = 0.7;
  const SystemModel scaled(fx.model.h, lam * fx.model.s);

  const auto t1 = compute_moment_table(fx.model, *fx.moments, 4, fx.grid);
  const auto t2 = compute_moment_table(scaled, *fx.moments, 4, fx.grid);
  const GeneratorSeries g1 = generator_via_recursion(t1, 4, fx.grid);
  const GeneratorSeries g2 = generator_via_recursion(t2, 4, fx.grid);
  for (const auto& [n, series] : g1.orders) {
    const double s = std::pow(lam, n);
    double d = 0.0;
    for (int k = 0; k < fx.grid.size(); ++k) {
      d = std::max(d, (g2.orders.at(n)[k] - s * series[k]).cwiseAbs().maxCoeff());
    }
    CHECK(d < 1e-12);
  }
}

TEST_CASE("generators annihilate the trace and preserve Hermiticity") {
  const SpinBosonFixture fx;
  const auto table = compute_moment_table(fx.model, *fx.moments, 4, fx.grid);
  const GeneratorSeries gs = generator_via_recursion(table, 4, fx.grid);
  for (const auto& [n, series] : gs.orders) {
    for (const Mat& g : series) {
      CHECK(trace_annihilation_defect(g, fx.model.dim()) < 1e-11);
      CHECK(hermiticity_preservation_defect(g, fx.model.dim()) < 1e-11);
    }
  }
}

TEST_CASE("odd generator orders vanish for a centered bath") {
  const SpinBosonFixture fx;
  const auto table = compute_moment_table(fx.model, *fx.moments, 4, fx.grid);
  const GeneratorSeries gs = generator_via_recursion(table, 4, fx.grid);
  const double even_scale =
      std::max(max_norm(gs.orders.at(2)), max_norm(gs.orders.at(4)));
  CHECK(max_norm(gs.orders.at(1)) < 1e-13 * even_scale);
  CHECK(max_norm(gs.orders.at(3)) < 1e-13 * even_scale);
}

TEST_CASE("closed-form order-2 generator matches the quadrature engine") {
  const SpinBosonFixture fx;
  const auto table = compute_moment_table(fx.model, *fx.moments, 2, fx.grid);
  const GeneratorSeries engine = generator_via_recursion(table, 2, fx.grid);
  const GeneratorSeries closed =
      tcl2_generator(fx.model, fx.bath->correlation_function(), fx.grid);
  CHECK(max_diff(engine.orders.at(2), closed.orders.at(2)) < 1e-12);
}

TEST_CASE("order-1 generator carries the bath mean") {
  SpectralDensity j;
  j.eta = 0.2;
  j.cutoff = 2.0;
  BathCorrelation corr = correlation_from_spectral_density(j, 0.0);
  corr.mean = 0.4;
  const SystemModel model(0.5 * pauli_z(), pauli_x());
  const TimeGrid grid(0.0, 0.1, 10);
  const GeneratorSeries gs = tcl2_generator(model, corr, grid);
  REQUIRE(gs.orders.count(1) == 1);
  for (int k = 0; k <= 10; ++k) {
    const Mat expected = Cplx(0, -1) * std::sqrt(2.0) * corr.mean *
                         model.coupling_superop(Sign::minus, grid.time(k));
    CHECK((gs.orders.at(1)[k] - expected).norm() < 1e-13);
  }
}

TEST_CASE("pure dephasing: coherence follows the quadrature exponent") {
  const double eta = 0.1, cutoff = 5.0;
  const TimeGrid grid(0.0, 1e-3 / cutoff * 5.0, 400);  // reaches 2/cutoff
  const GeneratorSeries gs = dephasing_tcl2(eta, cutoff, grid);
  SystemState rho0;
  rho0.rho = plus_state();
  const PropagationResult res = propagate(gs.summed(), grid, rho0);
  for (int k = 0; k <= grid.n_steps; k += 40) {
    const double expected = 0.5 * std::exp(-dephasing_exponent(eta, cutoff, grid.time(k)));
    CHECK(std::abs(std::abs(res.rho[k](0, 1)) - expected) < 1e-3 * expected);
  }
}

TEST_CASE("pure dephasing terminates the cumulant series at order two") {
  SpectralDensity j;
  j.eta = 0.1;
  j.cutoff = 5.0;
  const BathCorrelation corr = correlation_from_spectral_density(j, 0.0);
  const GaussianBathMoments mom(corr);
  const SystemModel model(0.5 * pauli_z(), pauli_z());
  const TimeGrid grid(0.0, 0.01, 40);
  const auto table = compute_moment_table(model, mom, 4, grid);
  const GeneratorSeries gs = generator_via_recursion(table, 4, grid);
  CHECK(max_norm(gs.orders.at(4)) < 1e-8 * max_norm(gs.orders.at(2)));
}

TEST_CASE("propagation conserves the trace and Hermiticity") {
  const SpinBosonFixture fx;
  const auto table = compute_moment_table(fx.model, *fx.moments, 4, fx.grid);
  const GeneratorSeries gs = generator_via_recursion(table, 4, fx.grid);
  SystemState rho0;
  rho0.rho = plus_state();
  const PropagationResult res = propagate(gs.summed(), fx.grid, rho0);
  CHECK(res.max_trace_drift < 1e-10);
  for (const Mat& r : res.rho) CHECK(hermiticity_defect(r) < 1e-12);

  // Step doubling reports the coarse-run error, so it contracts like dt^4
  // when the grid is refined.
  const double err = step_doubling_error(gs.summed(), fx.grid, rho0);
  CHECK(err < 1e-4);
  const TimeGrid fine(fx.grid.t0, fx.grid.dt / 2.0, 2 * fx.grid.n_steps);
  const auto fine_table = compute_moment_table(fx.model, *fx.moments, 4, fine);
  const GeneratorSeries fine_gs = generator_via_recursion(fine_table, 4, fine);
  const double err_fine = step_doubling_error(fine_gs.summed(), fine, rho0);
  CHECK(err_fine < err / 8.0);
}

TEST_CASE("dynamical map starts at the identity and preserves traces") {
  const SpinBosonFixture fx;
  const auto table = compute_moment_table(fx.model, *fx.moments, 2, fx.grid);
  const GeneratorSeries gs = generator_via_recursion(table, 2, fx.grid);
  const DynamicalMap map = dynamical_map_from_generator(gs.summed(), fx.grid);
  CHECK((map.lambda[0] - Mat::Identity(4, 4)).norm() == 0.0);
  for (const Mat& l : map.lambda) CHECK(trace_preservation_defect(l, 2) < 1e-9);
  // Applying the map to the initial state reproduces the propagated state.
  SystemState rho0;
  rho0.rho = plus_state();
  const PropagationResult res = propagate(gs.summed(), fx.grid, rho0);
  for (int k = 0; k < fx.grid.size(); ++k) {
    CHECK((unvec(map.lambda[k] * vec(rho0.rho), 2, 2) - res.rho[k]).norm() < 1e-11);
  }
}

TEST_CASE("midpoint interpolation is exact on cubics") {
  const int n = 9;
  std::vector<Mat> series(n);
  std::mt19937_64 rng(104);
  const Mat a = random_matrix(rng, 2, 2), b = random_matrix(rng, 2, 2),
            c = random_matrix(rng, 2, 2), d = random_matrix(rng, 2, 2);
  const auto cubic = [&](double x) { return Mat(a + x * b + x * x * c + x * x * x * d); };
  for (int k = 0; k < n; ++k) series[k] = cubic(k);
  const auto mids = midpoint_interpolate(series);
  REQUIRE(mids.size() == static_cast<size_t>(n - 1));
  for (int k = 0; k + 1 < n; ++k) {
    CHECK((mids[k] - cubic(k + 0.5)).norm() < 1e-11);
  }
  CHECK_THROWS(midpoint_interpolate(std::vector<Mat>(1, a)));
}

TEST_CASE("validation errors carry useful messages") {
  const SpinBosonFixture fx;
  CHECK_THROWS(compute_moment_table(fx.model, *fx.moments, 0, fx.grid));
  CHECK_THROWS(compute_moment_table(fx.model, *fx.moments, 5, fx.grid));

  const auto table = compute_moment_table(fx.model, *fx.moments, 2, fx.grid);
  const TimeGrid other(0.0, 0.05, 10);
  CHECK_THROWS(generator_via_recursion(table, 2, other));

  const GeneratorSeries gs = generator_via_recursion(table, 2, fx.grid);
  SystemState rho0;
  rho0.rho = plus_state();
  CHECK_THROWS(propagate(gs.summed(), other, rho0));
  SystemState wrong_dim;
  wrong_dim.rho = Mat::Identity(3, 3) / 3.0;
  CHECK_THROWS(propagate(gs.summed(), fx.grid, wrong_dim));
}
