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

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tclme/bath.hpp"
#include "tclme/tcl.hpp"

namespace tclme {
namespace {

void check_moment_table(const std::vector<MomentSeries>& moments, int n_max,
                        const TimeGrid& grid, const char* who) {
  if (n_max < 1) {
    throw std::invalid_argument(std::string(who) +
                                ": requested order must be positive");
  }
  if (static_cast<int>(moments.size()) < n_max) {
    throw std::invalid_argument(std::string(who) +
                                ": moment table is missing orders");
  }
  const int n_pts = grid.size();
  for (int n = 1; n <= n_max; ++n) {
    const MomentSeries& se = moments[n - 1];
    if (se.order != n || static_cast<int>(se.m.size()) != n_pts ||
        static_cast<int>(se.mdot.size()) != n_pts) {
      throw std::invalid_argument(std::string(who) +
                                  ": moment table does not match the grid");
    }
  }
}

}  // namespace

std::vector<Mat> GeneratorSeries::summed() const {
  std::vector<Mat> out;
  for (const auto& [order, series] : orders) {
    if (out.empty()) {
      out = series;
      continue;
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += series[k];
  }
  return out;
}

GeneratorSeries generator_via_recursion(const std::vector<MomentSeries>& moments,
                                        int n_max, const TimeGrid& grid) {
  check_moment_table(moments, n_max, grid, "generator recursion");
  const int n_pts = grid.size();

  GeneratorSeries gs;
  gs.grid = grid;
  for (int n = 1; n <= n_max; ++n) {
    gs.orders[n].resize(n_pts);
  }
  for (int k = 0; k < n_pts; ++k) {
    for (int n = 1; n <= n_max; ++n) {
      Mat g = moments[n - 1].mdot[k];
      for (int m = 1; m < n; ++m) {
        g.noalias() -= gs.orders[m][k] * moments[n - m - 1].m[k];
      }
      gs.orders[n][k] = std::move(g);
    }
  }
  return gs;
}

std::vector<Mat> generator_via_compositions(
    const std::vector<MomentSeries>& moments, int n, const TimeGrid& grid) {
  check_moment_table(moments, n, grid, "generator compositions");
  const std::vector<Composition> comps = enumerate_compositions(n);
  const int n_pts = grid.size();
  const Eigen::Index d2 = moments[0].mdot[0].rows();

  std::vector<Mat> out(n_pts);
  for (int k = 0; k < n_pts; ++k) {
    Mat total = Mat::Zero(d2, d2);
    for (const Composition& comp : comps) {
      Mat term = moments[comp.parts[0] - 1].mdot[k];
      for (std::size_t j = 1; j < comp.parts.size(); ++j) {
        term = term * moments[comp.parts[j] - 1].m[k];
      }
      total += static_cast<double>(comp.sign) * term;
    }
    out[k] = std::move(total);
  }
  return out;
}

GeneratorSeries tcl2_generator(const SystemModel& model,
                               const BathCorrelation& corr,
                               const TimeGrid& grid) {
  const int n_pts = grid.size();
  const double dt = grid.dt;
  const Eigen::Index d2 =
      static_cast<Eigen::Index>(model.dim()) * model.dim();
  const Mat zero = Mat::Zero(d2, d2);

  const SuperCorrelation d = super_correlation(corr);
  // Stationary component tables over the grid separations. The component
  // with a '-' later label vanishes identically, so only the '+' row is
  // tabulated.
  std::vector<Cplx> dpp(n_pts), dpm(n_pts);
  for (int s = 0; s < n_pts; ++s) {
    dpp[s] = d.component(Sign::plus, Sign::plus, grid.time(s), grid.time(0));
    dpm[s] = d.component(Sign::plus, Sign::minus, grid.time(s), grid.time(0));
  }

  std::vector<Mat> splus(n_pts), sminus(n_pts);
  for (int k = 0; k < n_pts; ++k) {
    splus[k] = model.coupling_superop(Sign::plus, grid.time(k));
    sminus[k] = model.coupling_superop(Sign::minus, grid.time(k));
  }

  GeneratorSeries gs;
  gs.grid = grid;

  if (corr.mean != 0.0) {
    auto& g1 = gs.orders[1];
    g1.assign(n_pts, zero);
    const Cplx f = Cplx(0.0, -1.0) * std::sqrt(2.0) * corr.mean;
    for (int k = 0; k < n_pts; ++k) g1[k] = f * sminus[k];
  }

  auto& g2 = gs.orders[2];
  g2.assign(n_pts, zero);
  for (int k = 1; k < n_pts; ++k) {
    Mat inner = zero;
    for (int i = 0; i <= k; ++i) {
      const double w = (i == 0 || i == k) ? 0.5 * dt : dt;
      // Lower vertex with system label '+': its bath label is '-', giving
      // the (+,-) component; system label '-' pairs with the (+,+) one.
      inner += (w * dpm[k - i]) * splus[i] + (w * dpp[k - i]) * sminus[i];
    }
    g2[k] = -1.0 * (sminus[k] * inner);
  }
  return gs;
}

}  // namespace tclme
