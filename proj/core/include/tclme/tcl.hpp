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

#ifndef TCLME_TCL_HPP_
#define TCLME_TCL_HPP_

#include <map>
#include <vector>

#include "tclme/algebra.hpp"
#include "tclme/grid.hpp"
#include "tclme/moments.hpp"
#include "tclme/types.hpp"

namespace tclme {

// Ordered integer partition of n; one term of the unrolled generator
// expansion, contributing sign * Mdot(parts[0]) * M(parts[1]) * ...
struct Composition {
  std::vector<int> parts;
  int sign = 1;  // (-1)^(k-1) for k parts
};

// All 2^(n-1) compositions of n, ordered so that (n) comes first and
// (1,1,...,1) last (descending lexicographic on the parts).
std::vector<Composition> enumerate_compositions(int n);

// One perturbative order of the dynamical-map expansion on a grid. m[k] is
// M^(n)(t_k) and mdot[k] the top-vertex derivative; M^(0) is the identity by
// convention and never stored.
struct MomentSeries {
  int order = 0;
  std::vector<Mat> m;
  std::vector<Mat> mdot;
};

struct GeneratorSeries {
  TimeGrid grid{0.0, 1.0, 1};
  std::map<int, std::vector<Mat>> orders;  // n -> G^(n)(t_k)

  // Pointwise sum of all stored orders.
  std::vector<Mat> summed() const;
};

struct MomentOptions {
  // Test hook: replace the trace-selected '-' label on the latest vertex.
  // 0 keeps the production rule, +1 forces '+', -1 forces '-'.
  int top_vertex_override = 0;
};

// Moment series for orders 1..opts.max_order on a shared grid. The simplex
// integrals use a symmetrized product-trapezoid rule on the closed ordered
// domain: a weakly descending index tuple carries the product of 1-D
// trapezoid weights divided by the factorial of each tie multiplicity, which
// is the n-cube rule folded onto the simplex. Orders 1 and 2 are summed
// directly; orders 3 and 4 integrate the pinned-top derivative cumulatively.
std::vector<MomentSeries> compute_moment_table(const SystemModel& model,
                                               const BathMomentProvider& bath, int n_max,
                                               const TimeGrid& grid,
                                               const MomentOptions& opts = {});

// Single-order conveniences over compute_moment_table.
MomentSeries compute_moment(const SystemModel& model, const BathMomentProvider& bath, int n,
                            const TimeGrid& grid);
MomentSeries compute_moment_derivative(const SystemModel& model, const BathMomentProvider& bath,
                                       int n, const TimeGrid& grid);

// G^(n) = Mdot^(n) - sum_{m=1}^{n-1} G^(m) M^(n-m), pointwise in time.
// moments[i] must hold order i+1.
GeneratorSeries generator_via_recursion(const std::vector<MomentSeries>& moments, int n_max,
                                        const TimeGrid& grid);

// Same order-n generator assembled from the composition expansion; kept as an
// independent code path for cross-checking against the recursion.
std::vector<Mat> generator_via_compositions(const std::vector<MomentSeries>& moments, int n,
                                            const TimeGrid& grid);

// Closed-form order-2 generator from the two-point correlation alone, plus
// the order-1 mean term when <B> != 0.
GeneratorSeries tcl2_generator(const SystemModel& model, const BathCorrelation& corr,
                               const TimeGrid& grid);

struct PropagationResult {
  std::vector<Mat> rho;  // interaction picture, per grid point
  double max_trace_drift = 0.0;
};

// Fixed-step RK4 on rho' = G(t) rho with the generator given on the grid;
// midpoint values come from 4-point cubic interpolation, keeping the scheme
// globally 4th order without leaving the shared grid.
PropagationResult propagate(const std::vector<Mat>& generator, const TimeGrid& grid,
                            const SystemState& rho0);

// Same propagation run at twice the step on the even grid points; returns the
// largest deviation from the fine trajectory (convergence diagnostic).
double step_doubling_error(const std::vector<Mat>& generator, const TimeGrid& grid,
                           const SystemState& rho0);

struct DynamicalMap {
  TimeGrid grid{0.0, 1.0, 1};
  std::vector<Mat> lambda;  // Lambda(t_k, t_0)
};

// Solve Lambda' = G Lambda, Lambda(t_0) = I, with the same RK4 scheme.
DynamicalMap dynamical_map_from_generator(const std::vector<Mat>& generator,
                                          const TimeGrid& grid);

// Cubic-interpolated values at the interval midpoints t_k + dt/2, k < n_steps.
std::vector<Mat> midpoint_interpolate(const std::vector<Mat>& series);

}  // namespace tclme

#endif  // TCLME_TCL_HPP_
