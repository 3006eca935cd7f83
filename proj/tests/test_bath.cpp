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

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <memory>
#include <random>

#include "helpers.hpp"
#include "tclme/bath.hpp"
#include "tclme/moments.hpp"

using namespace tclme;
using namespace tclme::testing;

namespace {

// The defining integral, evaluated with a quadrature routine that shares no
// code with the library's adaptive path.
Cplx correlation_by_quadrature(const SpectralDensity& j, double beta, double tau) {
  namespace bq = boost::math::quadrature;
  const auto integrand_re = [&](double w) {
    const double coth = beta <= 0.0 ? 1.0 : 1.0 / std::tanh(0.5 * beta * w);
    return j.value(w) * coth * std::cos(w * tau);
  };
  const auto integrand_im = [&](double w) { return -j.value(w) * std::sin(w * tau); };
  const double hi = j.omega_max();
  const double re = bq::gauss_kronrod<double, 61>::integrate(integrand_re, 1e-12, hi, 12, 1e-12);
  const double im = bq::gauss_kronrod<double, 61>::integrate(integrand_im, 1e-12, hi, 12, 1e-12);
  return Cplx(re, im) / kPi;
}

DiscreteBath three_qubit_bath() {
  std::vector<BathMode> modes(3);
  modes[0] = {BathMode::Kind::qubit, 0.9, 0.7, 6};
  modes[1] = {BathMode::Kind::qubit, 1.2, 0.5, 6};
  modes[2] = {BathMode::Kind::qubit, 0.75, 0.4, 6};
  return DiscreteBath(modes, 2.0);
}

// Cold enough that the level truncation sits far below the Wick tolerance:
// the top-level weight scales like exp(-beta omega n_max) and four-point
// moments amplify it by roughly n_max^2. The soft mode needs more levels.
DiscreteBath oscillator_bath() {
  std::vector<BathMode> modes(2);
  modes[0] = {BathMode::Kind::oscillator, 1.1, 0.6, 10};
  modes[1] = {BathMode::Kind::oscillator, 0.7, 0.4, 15};
  return DiscreteBath(modes, 3.0);
}

}  // namespace

TEST_CASE("ohmic closed form at zero temperature matches the defining integral") {
  SpectralDensity j;
  j.eta = 0.4;
  j.cutoff = 3.0;
  const BathCorrelation c = correlation_from_spectral_density(j, 0.0);
  for (const double tau : {0.0, 0.13, 0.77, 2.5}) {
    const Cplx expected = correlation_by_quadrature(j, 0.0, tau);
    CHECK(std::abs(c(tau) - expected) < 1e-8);
  }
  // And the closed form itself.
  const double tau = 0.31;
  const Cplx direct = j.eta / kPi * j.cutoff * j.cutoff /
                      std::pow(Cplx(1.0, j.cutoff * tau), 2);
  CHECK(std::abs(c(tau) - direct) < 1e-12);
}

TEST_CASE("finite temperature ohmic correlation matches independent quadrature") {
  SpectralDensity j;
  j.eta = 0.2;
  j.cutoff = 2.0;
  const BathCorrelation c = correlation_from_spectral_density(j, 1.7);
  for (const double tau : {0.05, 0.6, 1.8}) {
    CHECK(std::abs(c(tau) - correlation_by_quadrature(j, 1.7, tau)) < 1e-7);
  }
}

TEST_CASE("drude lorentz correlation matches quadrature on the truncated domain") {
  SpectralDensity j;
  j.kind = SpectralDensity::Kind::drude_lorentz;
  j.reorg = 0.3;
  j.width = 1.1;
  CHECK(j.value(0.9) == doctest::Approx(2 * 0.3 * 1.1 * 0.9 / (0.81 + 1.21)));
  CHECK(j.omega_max() == doctest::Approx(44.0));
  const BathCorrelation c = correlation_from_spectral_density(j, 2.3);
  for (const double tau : {0.1, 0.9}) {
    CHECK(std::abs(c(tau) - correlation_by_quadrature(j, 2.3, tau)) < 1e-6);
  }
}

TEST_CASE("correlation symmetry C(-tau) = conj(C(tau)) on 100 random lags") {
  SpectralDensity j;
  j.eta = 0.25;
  j.cutoff = 4.0;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  const BathCorrelation zero_t = correlation_from_spectral_density(j, 0.0);
  const BathCorrelation warm = correlation_from_spectral_density(j, 1.2);
  const BathCorrelation discrete = three_qubit_bath().correlation_function();
  for (int i = 0; i < 100; ++i) {
    const double tau = u(rng);
    CHECK(std::abs(zero_t(-tau) - std::conj(zero_t(tau))) < 1e-10);
    CHECK(std::abs(warm(-tau) - std::conj(warm(tau))) < 1e-8);
    CHECK(std::abs(discrete(-tau) - std::conj(discrete(tau))) < 1e-12);
  }
}

TEST_CASE("super correlation components reduce to the scalar correlation") {
  SpectralDensity j;
  j.eta = 0.3;
  j.cutoff = 2.5;
  const BathCorrelation c = correlation_from_spectral_density(j, 0.0);
  const SuperCorrelation d = super_correlation(c);
  const double t2 = 1.4, t1 = 0.3;
  const Cplx cc = c(t2 - t1);
  CHECK(std::abs(d.component(Sign::plus, Sign::plus, t2, t1) - 2.0 * cc.real()) < 1e-14);
  CHECK(std::abs(d.component(Sign::plus, Sign::minus, t2, t1) -
                 Cplx(0, 2.0) * cc.imag()) < 1e-14);
  CHECK(std::abs(d.component(Sign::minus, Sign::plus, t2, t1)) == 0.0);
  CHECK(std::abs(d.component(Sign::minus, Sign::minus, t2, t1)) == 0.0);
}

TEST_CASE("discrete bath two-vertex moments match the commutator algebra") {
  const DiscreteBath bath = three_qubit_bath();
  const DiscreteBathMoments mom(std::make_shared<DiscreteBath>(bath));
  const double t2 = 0.9, t1 = 0.2;
  const Cplx cc = bath.correlation(t2 - t1);
  const std::array<double, 2> times{t2, t1};
  const auto at = [&](Sign s2, Sign s1) {
    const std::array<Sign, 2> sigmas{s2, s1};
    return mom.moment(sigmas, times);
  };
  CHECK(std::abs(at(Sign::plus, Sign::plus) - 2.0 * cc.real()) < 1e-12);
  CHECK(std::abs(at(Sign::plus, Sign::minus) - Cplx(0, 2.0) * cc.imag()) < 1e-12);
  CHECK(std::abs(at(Sign::minus, Sign::plus)) < 1e-14);
  CHECK(std::abs(at(Sign::minus, Sign::minus)) < 1e-14);
}

TEST_CASE("pairing enumeration counts the double factorials") {
  const int expected[] = {1, 3, 15, 105, 945, 10395};
  for (int m = 1; m <= 6; ++m) {
    CHECK(static_cast<int>(enumerate_pairings(2 * m).size()) == expected[m - 1]);
  }
  CHECK_THROWS(enumerate_pairings(3));
  CHECK_THROWS(enumerate_pairings(14));
}

TEST_CASE("every pairing is a perfect matching") {
  for (const PairPartition& p : enumerate_pairings(6)) {
    std::array<int, 6> seen{};
    for (const auto& [a, b] : p.pairs) {
      CHECK(a < b);
      ++seen[a];
      ++seen[b];
    }
    for (int s : seen) CHECK(s == 1);
  }
}

TEST_CASE("oscillator bath four-point moments obey Wick factorization") {
  const DiscreteBath bath = oscillator_bath();
  const DiscreteBathMoments mom(std::make_shared<DiscreteBath>(bath));
  const SuperCorrelation d = super_correlation(bath.correlation_function());
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 4> times;
    for (double& t : times) t = u(rng);
    std::sort(times.begin(), times.end(), std::greater<>());
    // Ties have measure zero for this generator, but nudge if they occur.
    for (int i = 0; i + 1 < 4; ++i) {
      if (times[i] - times[i + 1] < 1e-9) times[i] += 1e-6 * (i + 1);
    }
    std::array<Sign, 4> sigmas;
    for (Sign& s : sigmas) s = coin(rng) ? Sign::plus : Sign::minus;
    sigmas[0] = Sign::plus;  // a leading commutator channel is trivially zero
    const Cplx exact = mom.moment(sigmas, times);
    const Cplx wick = wick_multipoint(d, sigmas, times);
    CHECK(std::abs(exact - wick) < 1e-9);
  }
}

TEST_CASE("three qubit bath violates Wick factorization") {
  const DiscreteBath bath = three_qubit_bath();
  const DiscreteBathMoments mom(std::make_shared<DiscreteBath>(bath));
  const SuperCorrelation d = super_correlation(bath.correlation_function());
  double worst = 0.0;
  const std::array<Sign, 4> sigmas{Sign::plus, Sign::plus, Sign::plus, Sign::plus};
  for (const double spread : {0.3, 0.7, 1.1, 1.6}) {
    const std::array<double, 4> times{3.0 * spread, 2.0 * spread, spread, 0.0};
    worst = std::max(worst, std::abs(mom.moment(sigmas, times) - wick_multipoint(d, sigmas, times)));
  }
  CHECK(worst > 1e-4);
}

TEST_CASE("discrete bath moments are stationary") {
  const DiscreteBath bath = three_qubit_bath();
  const DiscreteBathMoments mom(std::make_shared<DiscreteBath>(bath));
  CHECK(mom.stationary());
  const std::array<Sign, 4> sigmas{Sign::plus, Sign::minus, Sign::plus, Sign::plus};
  const std::array<double, 4> times{1.7, 1.1, 0.6, 0.1};
  std::array<double, 4> shifted = times;
  for (double& t : shifted) t += 0.83;
  CHECK(std::abs(mom.moment(sigmas, times) - mom.moment(sigmas, shifted)) < 1e-12);
}

TEST_CASE("strictly ordered entry point rejects ties, relaxed one admits them") {
  const DiscreteBath bath = three_qubit_bath();
  const std::array<Sign, 3> sigmas{Sign::plus, Sign::plus, Sign::plus};
  const std::array<double, 3> tied{1.0, 0.5, 0.5};
  CHECK_THROWS(bath.exact_multipoint_moment(sigmas, tied));
  CHECK_NOTHROW(bath.moment_allow_ties(sigmas, tied));
  const std::array<double, 3> increasing{0.2, 0.5, 0.9};
  CHECK_THROWS(bath.exact_multipoint_moment(sigmas, increasing));
}

TEST_CASE("bath means and diagnostics") {
  const DiscreteBath spins = three_qubit_bath();
  CHECK(std::abs(spins.mean()) < 1e-14);
  CHECK(spins.shortest_recurrence() == doctest::Approx(2.0 * kPi / 1.2));

  const DiscreteBath osc = oscillator_bath();
  CHECK(osc.top_level_population() < 1e-6);

  // A shallow oscillator truncation leaves visible top-level weight.
  std::vector<BathMode> hot(1);
  hot[0] = {BathMode::Kind::oscillator, 0.4, 0.2, 2};
  CHECK(DiscreteBath(hot, 0.8).top_level_population() > 1e-3);
}

TEST_CASE("gaussian moment provider handles a static mean") {
  SpectralDensity j;
  j.eta = 0.2;
  j.cutoff = 2.0;
  BathCorrelation c = correlation_from_spectral_density(j, 0.0);
  c.mean = 0.35;
  const GaussianBathMoments mom(c);
  CHECK(mom.mean() == doctest::Approx(0.35));
  CHECK_FALSE(mom.wick_factorizable());
  const std::array<Sign, 1> plus{Sign::plus};
  const std::array<Sign, 1> minus{Sign::minus};
  const std::array<double, 1> t{0.7};
  CHECK(std::abs(mom.moment(plus, t) - std::sqrt(2.0) * 0.35) < 1e-14);
  CHECK(std::abs(mom.moment(minus, t)) == 0.0);

  BathCorrelation centered = c;
  centered.mean = 0.0;
  const GaussianBathMoments zero_mean(centered);
  CHECK(zero_mean.wick_factorizable());
  // With the mean removed, the two-point moment is the pair component.
  const std::array<Sign, 2> pp{Sign::plus, Sign::plus};
  const std::array<double, 2> tt{0.9, 0.4};
  CHECK(std::abs(zero_mean.moment(pp, tt) -
                 zero_mean.pair_component(Sign::plus, Sign::plus, 0.9, 0.4)) < 1e-14);
  // The mean shifts the two-point value by the product of vertex means.
  CHECK(std::abs(mom.moment(pp, tt) - zero_mean.moment(pp, tt) - 2.0 * 0.35 * 0.35) < 1e-13);
}
