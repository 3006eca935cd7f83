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

#ifndef TCLME_GRID_HPP
#define TCLME_GRID_HPP

#include <stdexcept>

namespace tclme {

// Uniform time grid t_k = t0 + k*dt, k = 0..n_steps. Generators, moments and
// propagated states all live on the same grid.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.0;
  int n_steps = 0;

  TimeGrid() = default;
  TimeGrid(double t0_, double dt_, int n_steps_) : t0(t0_), dt(dt_), n_steps(n_steps_) {
    if (dt <= 0.0) throw std::invalid_argument("grid.dt must be positive");
    if (n_steps < 1) throw std::invalid_argument("grid.n_steps must be at least 1");
  }

  int size() const { return n_steps + 1; }
  double time(int k) const { return t0 + dt * k; }
  double t_final() const { return time(n_steps); }
};

}  // namespace tclme

#endif  // TCLME_GRID_HPP
