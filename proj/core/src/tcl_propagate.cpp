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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tclme/tcl.hpp"

namespace tclme {

std::vector<Mat> midpoint_interpolate(const std::vector<Mat>& series) {
  const int n = static_cast<int>(series.size());
  if (n < 2) {
    throw std::invalid_argument(
        "midpoint interpolation needs at least two grid points");
  }
  const int m = std::min(4, n);
  std::vector<Mat> out(n - 1);
  for (int k = 0; k + 1 < n; ++k) {
    const int base = std::clamp(k - 1, 0, n - m);
    const double x = (k + 0.5) - base;
    for (int j = 0; j < m; ++j) {
      double c = 1.0;
      for (int l = 0; l < m; ++l) {
        if (l != j) c *= (x - l) / (j - l);
      }
      if (j == 0) {
        out[k] = c * series[base];
      } else {
        out[k] += c * series[base + j];
      }
    }
  }
  return out;
}

PropagationResult propagate(const std::vector<Mat>& generator,
                            const TimeGrid& grid, const SystemState& rho0) {
  const int n_pts = grid.size();
  if (static_cast<int>(generator.size()) != n_pts) {
    throw std::invalid_argument(
        "generator series does not match the propagation grid");
  }
  validate_density_matrix(rho0.rho, "initial state");
  const Eigen::Index d = rho0.rho.rows();
  if (generator[0].rows() != d * d || generator[0].cols() != d * d) {
    throw std::invalid_argument(
        "generator dimension does not match the initial state");
  }

  const double dt = grid.dt;
  const std::vector<Mat> mid = midpoint_interpolate(generator);

  PropagationResult res;
  res.rho.reserve(n_pts);
  res.rho.push_back(rho0.rho);
  Vec v = vec(rho0.rho);
  double drift = std::abs(rho0.rho.trace() - Cplx(1.0, 0.0));
  for (int k = 0; k + 1 < n_pts; ++k) {
    const Vec k1 = generator[k] * v;
    const Vec k2 = mid[k] * (v + (0.5 * dt) * k1);
    const Vec k3 = mid[k] * (v + (0.5 * dt) * k2);
    const Vec k4 = generator[k + 1] * (v + dt * k3);
    v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Mat r = unvec(v, d, d);
    drift = std::max(drift, std::abs(r.trace() - Cplx(1.0, 0.0)));
    res.rho.push_back(std::move(r));
  }
  res.max_trace_drift = drift;
  return res;
}

double step_doubling_error(const std::vector<Mat>& generator,
                           const TimeGrid& grid, const SystemState& rho0) {
  const PropagationResult fine = propagate(generator, grid, rho0);
  const int n_half = grid.n_steps / 2;
  if (n_half < 1) return 0.0;

  // The doubled-step run still reads its midpoint generator values off the
  // fine grid, so the comparison isolates the time-stepping error.
  const double dt2 = 2.0 * grid.dt;
  const Eigen::Index d = rho0.rho.rows();
  Vec v = vec(rho0.rho);
  double err = 0.0;
  for (int j = 0; j < n_half; ++j) {
    const Mat& g0 = generator[2 * j];
    const Mat& gm = generator[2 * j + 1];
    const Mat& g1 = generator[2 * j + 2];
    const Vec k1 = g0 * v;
    const Vec k2 = gm * (v + (0.5 * dt2) * k1);
    const Vec k3 = gm * (v + (0.5 * dt2) * k2);
    const Vec k4 = g1 * (v + dt2 * k3);
    v += (dt2 / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const Mat r = unvec(v, d, d);
    err = std::max(err, (r - fine.rho[2 * j + 2]).cwiseAbs().maxCoeff());
  }
  return err;
}

DynamicalMap dynamical_map_from_generator(const std::vector<Mat>& generator,
                                          const TimeGrid& grid) {
  const int n_pts = grid.size();
  if (static_cast<int>(generator.size()) != n_pts) {
    throw std::invalid_argument(
        "generator series does not match the propagation grid");
  }
  const Eigen::Index d2 = generator[0].rows();
  const double dt = grid.dt;
  const std::vector<Mat> mid = midpoint_interpolate(generator);

  DynamicalMap map;
  map.grid = grid;
  map.lambda.reserve(n_pts);
  Mat x = Mat::Identity(d2, d2);
  map.lambda.push_back(x);
  for (int k = 0; k + 1 < n_pts; ++k) {
    const Mat k1 = generator[k] * x;
    const Mat k2 = mid[k] * (x + (0.5 * dt) * k1);
    const Mat k3 = mid[k] * (x + (0.5 * dt) * k2);
    const Mat k4 = generator[k + 1] * (x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    map.lambda.push_back(x);
  }
  return map;
}

}  // namespace tclme
