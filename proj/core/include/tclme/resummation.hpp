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

#ifndef TCLME_RESUMMATION_HPP_
#define TCLME_RESUMMATION_HPP_

#include <map>
#include <vector>

#include "tclme/grid.hpp"
#include "tclme/tcl.hpp"
#include "tclme/types.hpp"

namespace tclme {

struct PinvInfo {
  int rank = 0;
  double sigma_max = 0.0;
  double cond = 0.0;  // sigma_max over the smallest retained singular value
};

// Moore-Penrose pseudo-inverse with singular values below
// cutoff * sigma_max dropped. Throws when nothing is retained.
Mat regularized_inverse(const Mat& a, double cutoff, PinvInfo* info = nullptr);

struct ResummationOptions {
  double svd_cutoff = 1e-10;
  // The pseudo-inverse of the base order is only taken from this grid index
  // on; below it the generator is too close to zero for a stable inverse.
  int epsilon_steps = 5;
};

// One level of the resummation hierarchy: a generator series together with
// its lowest nonvanishing order, which anchors the next level.
struct HierarchyLevel {
  int level = 1;
  int lowest_order = 0;  // 0 when every order vanishes on the grid
  std::map<int, std::vector<Mat>> series;
};

// Classify the orders of a generator series. An order counts as zero when its
// largest entry stays below zero_tol times the largest entry overall.
HierarchyLevel make_hierarchy_level(const GeneratorSeries& g,
                                    double zero_tol = 1e-12);

// Ratio series Gtilde^(n) = pinv(G^(l)) G^(n), stored by the shift n - l.
struct GtildeSeries {
  int base_order = 0;
  int start = 0;  // first grid index with a pseudo-inverse
  Eigen::Index dim = 0;
  std::map<int, std::vector<Mat>> relative;  // shift -> series, zero below start
  std::vector<PinvInfo> base_pinv;           // one entry per index >= start
};

GtildeSeries gtilde_series(const HierarchyLevel& level, const TimeGrid& grid,
                           const ResummationOptions& opts = {});

// The next-level generator [sum_n d/dt Gtilde^(n)] (1 + sum_n Gtilde^(n))^-1,
// expanded in total relative order and kept through absolute order
// `truncation` (so a base-2 series truncated at 4 keeps just d/dt Gtilde^(2)).
// Truncating beyond the stored shifts would need unknown orders and throws.
// Time derivatives use 5-point 4th-order stencils confined to [start, end];
// entries below start are zero.
std::vector<Mat> level2_generator(const GtildeSeries& gt, int truncation,
                                  const TimeGrid& grid);

struct ResummedGenerator {
  int start = 0;
  std::vector<Mat> base;  // G^(l)
  std::vector<Mat> x;     // solution of X' = G2 X, X = I below start
  std::vector<Mat> gnp;   // base * x
};

// Integrate X' = g2 X from the seed at grid index start (RK4, interpolated
// midpoints) and form the resummed generator base * X. A zero g2 leaves the
// identity seed untouched, making gnp coincide with base.
ResummedGenerator resummed_generator(const std::vector<Mat>& base,
                                     const std::vector<Mat>& g2,
                                     const TimeGrid& grid, int start,
                                     const Mat& seed);
ResummedGenerator resummed_generator(const std::vector<Mat>& base,
                                     const std::vector<Mat>& g2,
                                     const TimeGrid& grid, int start);

}  // namespace tclme

#endif  // TCLME_RESUMMATION_HPP_
