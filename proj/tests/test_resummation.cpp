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

#include <cmath>
#include <memory>
#include <random>

#include "helpers.hpp"
#include "tclme/bath.hpp"
#include "tclme/moments.hpp"
#include "tclme/resummation.hpp"
#include "tclme/tcl.hpp"

using namespace tclme;
using namespace tclme::testing;

namespace {

GeneratorSeries spin_boson_generators(const TimeGrid& grid) {
  const SystemModel model(0.5 * pauli_z(), pauli_x());
  std::vector<BathMode> modes(2);
  modes[0] = {BathMode::Kind::qubit, 0.9, 0.8, 6};
  modes[1] = {BathMode::Kind::qubit, 1.3, 0.6, 6};
  const auto bath = std::make_shared<DiscreteBath>(modes, 2.0);
  const DiscreteBathMoments mom(bath);
  return generator_via_recursion(compute_moment_table(model, mom, 4, grid), 4, grid);
}

// Hand-built ratio series with smooth scalar profiles: shift s carries
// phi_s(t) * C_s for fixed random matrices C_s. Derivatives are known in
// closed form, giving an independent route to the level-2 generator.
struct SyntheticGtilde {
  GtildeSeries gt;
  std::vector<Mat> c;                       // per shift
  std::vector<std::function<double(double)>> phi;
  std::vector<std::function<double(double)>> dphi;

  SyntheticGtilde(std::mt19937_64& rng, const TimeGrid& grid, int start,
                  int base_order) {
    gt.base_order = base_order;
    gt.start = start;
    gt.dim = 4;
    c.push_back(random_matrix(rng, 4, 4));
    c.push_back(random_matrix(rng, 4, 4));
    phi.push_back([](double t) { return 0.3 * std::sin(1.7 * t) + 0.1 * t; });
    dphi.push_back([](double t) { return 0.51 * std::cos(1.7 * t) + 0.1; });
    phi.push_back([](double t) { return 0.2 * (1.0 - std::cos(1.1 * t)); });
    dphi.push_back([](double t) { return 0.22 * std::sin(1.1 * t); });
    for (int s = 1; s <= 2; ++s) {
      std::vector<Mat> series(grid.size(), Mat::Zero(4, 4));
      for (int k = start; k < grid.size(); ++k) {
        series[k] = phi[s - 1](grid.time(k)) * c[s - 1];
      }
      gt.relative[s] = std::move(series);
    }
  }

  // Level-2 generator through absolute order base+2 from the closed-form
  // derivatives: dG1*(I - G1) + dG2, collected by total relative order <= 2.
  Mat analytic(double t) const {
    const Mat id = Mat::Identity(4, 4);
    const Mat g1 = phi[0](t) * c[0];
    const Mat dg1 = dphi[0](t) * c[0];
    const Mat dg2 = dphi[1](t) * c[1];
    return dg1 * (id - g1) + dg2;
  }
};

}  // namespace

TEST_CASE("regularized inverse basics") {
  PinvInfo info;
  const Mat id = Mat::Identity(3, 3);
  CHECK((regularized_inverse(id, 1e-10, &info) - id).norm() < 1e-14);
  CHECK(info.rank == 3);
  CHECK(info.cond == doctest::Approx(1.0));

  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-20;
  const Mat pinv = regularized_inverse(d, 1e-12, &info);
  CHECK(info.rank == 1);
  CHECK(pinv(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(pinv(1, 1)) == 0.0);

  CHECK_THROWS(regularized_inverse(Mat::Zero(2, 2), 1e-10));
}

TEST_CASE("regularized inverse matches a direct solve when well conditioned") {
  std::mt19937_64 rng(201);
  const Mat a = random_matrix(rng, 16, 16) + 4.0 * Mat::Identity(16, 16);
  const Mat pinv = regularized_inverse(a, 1e-12);
  CHECK((pinv * a - Mat::Identity(16, 16)).norm() < 1e-10);
  CHECK((a * pinv * a - a).norm() < 1e-9);
}

TEST_CASE("hierarchy classification drops vanishing orders") {
  const TimeGrid grid(0.0, 0.05, 20);
  const GeneratorSeries gs = spin_boson_generators(grid);
  const HierarchyLevel level = make_hierarchy_level(gs);
  CHECK(level.level == 1);
  CHECK(level.lowest_order == 2);
  CHECK(level.series.count(1) == 0);  // odd orders are zero for this bath
  CHECK(level.series.count(3) == 0);
  CHECK(level.series.count(2) == 1);
  CHECK(level.series.count(4) == 1);
}

TEST_CASE("ratio series equals the directly assembled pseudo-inverse product") {
  const TimeGrid grid(0.0, 0.05, 20);
  const GeneratorSeries gs = spin_boson_generators(grid);
  const HierarchyLevel level = make_hierarchy_level(gs);
  ResummationOptions opts;
  const GtildeSeries gt = gtilde_series(level, grid, opts);
  CHECK(gt.base_order == 2);
  CHECK(gt.start == opts.epsilon_steps);
  REQUIRE(gt.relative.count(2) == 1);
  for (int k = gt.start; k < grid.size(); ++k) {
    const Mat direct = regularized_inverse(gs.orders.at(2)[k], opts.svd_cutoff) *
                       gs.orders.at(4)[k];
    CHECK((gt.relative.at(2)[k] - direct).norm() < 1e-10);
  }
  for (int k = 0; k < gt.start; ++k) CHECK(gt.relative.at(2)[k].norm() == 0.0);
}

TEST_CASE("empty hierarchies are rejected, empty ratios give a zero level-2 term") {
  GeneratorSeries empty;
  empty.grid = TimeGrid(0.0, 0.1, 10);
  empty.orders[2] = std::vector<Mat>(11, Mat::Zero(4, 4));
  const HierarchyLevel level = make_hierarchy_level(empty);
  CHECK(level.lowest_order == 0);
  CHECK_THROWS(gtilde_series(level, empty.grid));

  // A single nonzero order: the ratio series is trivial and G2 vanishes.
  const TimeGrid grid(0.0, 0.05, 20);
  GeneratorSeries single;
  single.grid = grid;
  single.orders[2] = spin_boson_generators(grid).orders.at(2);
  const GtildeSeries gt = gtilde_series(make_hierarchy_level(single), grid);
  CHECK(gt.relative.empty());
  const auto g2 = level2_generator(gt, 4, grid);
  for (const Mat& m : g2) CHECK(m.norm() == 0.0);
}

TEST_CASE("level-2 truncation bounds are enforced") {
  const TimeGrid grid(0.0, 0.05, 20);
  const GeneratorSeries gs = spin_boson_generators(grid);
  const GtildeSeries gt = gtilde_series(make_hierarchy_level(gs), grid);
  CHECK_NOTHROW(level2_generator(gt, 4, grid));
  CHECK_THROWS(level2_generator(gt, 2, grid));  // no terms at or below base
  CHECK_THROWS(level2_generator(gt, 6, grid));  // would need order-6 data
  const TimeGrid tiny(0.0, 0.05, 7);
  GtildeSeries shifted = gt;
  shifted.start = 4;  // leaves a 3-point window on `tiny`
  CHECK_THROWS(level2_generator(shifted, 4, tiny));
}

TEST_CASE("leading level-2 term scales as the square of the coupling") {
  const TimeGrid grid(0.0, 0.05, 20);
  const GeneratorSeries gs = spin_boson_generators(grid);
  const double lam = 0.6;
  GeneratorSeries scaled;
  scaled.grid = grid;
  for (const auto& [n, series] : gs.orders) {
    std::vector<Mat> s(series.size());
    for (size_t k = 0; k < series.size(); ++k) s[k] = std::pow(lam, n) * series[k];
    scaled.orders[n] = std::move(s);
  }
  const auto base = level2_generator(gtilde_series(make_hierarchy_level(gs), grid), 4, grid);
  const auto sc = level2_generator(gtilde_series(make_hierarchy_level(scaled), grid), 4, grid);
  for (size_t k = 0; k < base.size(); ++k) {
    CHECK((sc[k] - lam * lam * base[k]).norm() < 1e-10 * std::max(1.0, base[k].norm()));
  }
}

TEST_CASE("level-2 generator matches closed-form derivatives on synthetic data") {
  std::mt19937_64 rng(202);
  const TimeGrid grid(0.0, 0.02, 60);
  const SyntheticGtilde syn(rng, grid, 5, 1);
  const auto g2 = level2_generator(syn.gt, 3, grid);
  double err = 0.0;
  for (int k = syn.gt.start; k < grid.size(); ++k) {
    err = std::max(err, (g2[k] - syn.analytic(grid.time(k))).norm());
  }
  CHECK(err < 1e-6);

  // Halving the step drops the stencil error by far more than the factor 4 a
  // second-order scheme would give.
  const TimeGrid fine(0.0, 0.01, 120);
  const SyntheticGtilde syn_fine(rng, fine, 10, 1);
  // Rebuild with the same matrices so the comparison is like for like.
  SyntheticGtilde syn2 = syn_fine;
  syn2.c = syn.c;
  for (int s = 1; s <= 2; ++s) {
    for (int k = syn2.gt.start; k < fine.size(); ++k) {
      syn2.gt.relative[s][k] = syn.phi[s - 1](fine.time(k)) * syn.c[s - 1];
    }
  }
  const auto g2f = level2_generator(syn2.gt, 3, fine);
  double err_fine = 0.0;
  for (int k = syn2.gt.start; k < fine.size(); ++k) {
    err_fine = std::max(err_fine, (g2f[k] - syn2.analytic(fine.time(k))).norm());
  }
  CHECK(err_fine < err / 8.0);
}

TEST_CASE("zero level-2 generator reduces the resummation to the base order") {
  const TimeGrid grid(0.0, 0.05, 20);
  const GeneratorSeries gs = spin_boson_generators(grid);
  const std::vector<Mat>& base = gs.orders.at(2);
  const std::vector<Mat> zero(grid.size(), Mat::Zero(4, 4));
  const ResummedGenerator rg = resummed_generator(base, zero, grid, 5);
  CHECK(max_diff(rg.gnp, base) == 0.0);
  for (const Mat& x : rg.x) CHECK((x - Mat::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("resummed generator keeps the product structure and the seed") {
  std::mt19937_64 rng(203);
  const TimeGrid grid(0.0, 0.02, 60);
  const SyntheticGtilde syn(rng, grid, 5, 1);
  const auto g2 = level2_generator(syn.gt, 3, grid);
  std::vector<Mat> base(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    base[k] = grid.time(k) * Mat::Identity(4, 4);
  }
  Mat seed = Mat::Identity(4, 4);
  for (const auto& [s, series] : syn.gt.relative) seed += series[syn.gt.start];
  const ResummedGenerator rg = resummed_generator(base, g2, grid, syn.gt.start, seed);
  CHECK((rg.x[syn.gt.start] - seed).norm() == 0.0);
  for (int k = 0; k < grid.size(); ++k) {
    CHECK((rg.gnp[k] - base[k] * rg.x[k]).norm() == 0.0);
  }
  CHECK_THROWS(resummed_generator(base, g2, grid, grid.size() + 1, seed));
}

TEST_CASE("resummed spin-boson generator annihilates the trace") {
  const TimeGrid grid(0.0, 0.05, 30);
  const GeneratorSeries gs = spin_boson_generators(grid);
  const GtildeSeries gt = gtilde_series(make_hierarchy_level(gs), grid);
  const auto g2 = level2_generator(gt, 4, grid);
  Mat seed = Mat::Identity(4, 4);
  for (const auto& [s, series] : gt.relative) seed += series[gt.start];
  const ResummedGenerator rg =
      resummed_generator(gs.orders.at(2), g2, grid, gt.start, seed);
  for (const Mat& g : rg.gnp) CHECK(trace_annihilation_defect(g, 2) < 1e-11);
}

TEST_CASE("third-level pass through the same machinery") {
  // Treat a smooth two-order series as the level-2 generator's own expansion
  // and run one more hierarchy step; with data orders {1, 2} the level-3
  // construction must reproduce the same algebraic identities.
  std::mt19937_64 rng(204);
  const TimeGrid grid(0.0, 0.02, 60);
  GeneratorSeries level2;
  level2.grid = grid;
  const Mat c1 = random_matrix(rng, 4, 4);
  const Mat c2 = random_matrix(rng, 4, 4);
  std::vector<Mat> o1(grid.size()), o2(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    const double t = grid.time(k);
    o1[k] = std::sin(0.9 * t) * c1;
    o2[k] = (1.0 - std::cos(1.3 * t)) * c2;
  }
  level2.orders[1] = o1;
  level2.orders[2] = o2;

  HierarchyLevel level = make_hierarchy_level(level2);
  level.level = 2;
  CHECK(level.lowest_order == 1);
  const GtildeSeries gt = gtilde_series(level, grid);
  REQUIRE(gt.relative.count(1) == 1);

  // Ratio series against closed forms: pinv(sin(.9t) c1) ((1-cos(1.3t)) c2).
  for (int k = gt.start; k < grid.size(); ++k) {
    const double t = grid.time(k);
    const Mat expected = (1.0 - std::cos(1.3 * t)) / std::sin(0.9 * t) *
                         (regularized_inverse(c1, 1e-10) * c2);
    CHECK((gt.relative.at(1)[k] - expected).norm() < 1e-9);
  }

  const auto g3 = level2_generator(gt, 2, grid);
  const ResummedGenerator rg = resummed_generator(o1, g3, grid, gt.start);
  for (int k = 0; k < grid.size(); ++k) {
    CHECK((rg.gnp[k] - o1[k] * rg.x[k]).norm() == 0.0);
  }
}
