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

#include <Eigen/SVD>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tclme/resummation.hpp"

namespace tclme {
namespace {

// 4th-order first derivative of f on [0, m] at offset j, grid spacing h.
// Central stencil inside, one-sided at the two points next to each end.
Mat stencil_derivative(const std::vector<Mat>& f, int first, int j, int m,
                       double h) {
  const auto at = [&](int i) -> const Mat& { return f[first + i]; };
  const double s = 1.0 / (12.0 * h);
  if (j >= 2 && j <= m - 2) {
    return s * (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2));
  }
  if (j == 0) {
    return s * (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) -
                3.0 * at(4));
  }
  if (j == 1) {
    return s *
           (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4));
  }
  if (j == m - 1) {
    return s * (3.0 * at(m) + 10.0 * at(m - 1) - 18.0 * at(m - 2) +
                6.0 * at(m - 3) - at(m - 4));
  }
  return s * (25.0 * at(m) - 48.0 * at(m - 1) + 36.0 * at(m - 2) -
              16.0 * at(m - 3) + 3.0 * at(m - 4));
}

}  // namespace

Mat regularized_inverse(const Mat& a, double cutoff, PinvInfo* info) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = cutoff * sigma_max;
  int rank = 0;
  while (rank < sv.size() && sv(rank) > threshold && sv(rank) > 0.0) ++rank;
  if (rank == 0) {
    throw std::runtime_error("regularized inverse: no retained singular values");
  }
  if (info) {
    info->rank = rank;
    info->sigma_max = sigma_max;
    info->cond = sigma_max / sv(rank - 1);
  }
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (int i = 0; i < rank; ++i) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() *
         svd.matrixU().adjoint();
}

HierarchyLevel make_hierarchy_level(const GeneratorSeries& g, double zero_tol) {
  HierarchyLevel out;
  out.level = 1;

  double overall = 0.0;
  std::map<int, double> peak;
  for (const auto& [n, series] : g.orders) {
    double p = 0.0;
    for (const Mat& gk : series) p = std::max(p, gk.cwiseAbs().maxCoeff());
    peak[n] = p;
    overall = std::max(overall, p);
  }
  if (overall == 0.0) {
    out.lowest_order = 0;
    return out;
  }
  for (const auto& [n, p] : peak) {
    if (p > zero_tol * overall) {
      out.lowest_order = n;
      break;
    }
  }
  // Orders at the relative noise floor are dropped wholesale; feeding them
  // through the ratio series would put amplified noise into the hierarchy.
  for (const auto& [n, series] : g.orders) {
    if (n >= out.lowest_order && peak[n] > zero_tol * overall) {
      out.series[n] = series;
    }
  }
  return out;
}

GtildeSeries gtilde_series(const HierarchyLevel& level, const TimeGrid& grid,
                           const ResummationOptions& opts) {
  if (level.lowest_order <= 0) {
    throw std::invalid_argument(
        "resummation needs a hierarchy level with a nonzero base order");
  }
  const int n_pts = grid.size();
  const int start = opts.epsilon_steps;
  if (start < 1 || start >= n_pts) {
    throw std::invalid_argument(
        "resummation start index must fall inside the grid");
  }
  const std::vector<Mat>& base = level.series.at(level.lowest_order);
  if (static_cast<int>(base.size()) != n_pts) {
    throw std::invalid_argument("hierarchy series does not match the grid");
  }

  GtildeSeries out;
  out.base_order = level.lowest_order;
  out.start = start;
  out.dim = base[0].rows();
  const Mat zero = Mat::Zero(out.dim, out.dim);
  for (const auto& [n, series] : level.series) {
    if (n > level.lowest_order) {
      out.relative[n - level.lowest_order].assign(n_pts, zero);
    }
  }
  out.base_pinv.reserve(n_pts - start);
  for (int k = start; k < n_pts; ++k) {
    PinvInfo info;
    const Mat pinv = regularized_inverse(base[k], opts.svd_cutoff, &info);
    out.base_pinv.push_back(info);
    for (auto& [shift, rel] : out.relative) {
      rel[k] = pinv * level.series.at(level.lowest_order + shift)[k];
    }
  }
  return out;
}

std::vector<Mat> level2_generator(const GtildeSeries& gt, int truncation,
                                  const TimeGrid& grid) {
  const int n_pts = grid.size();
  const int start = gt.start;
  const int m = n_pts - 1 - start;
  if (m < 4) {
    throw std::invalid_argument(
        "resummation window too short for the derivative stencil");
  }
  const Mat zero = Mat::Zero(gt.dim, gt.dim);
  const Mat id = Mat::Identity(gt.dim, gt.dim);

  std::vector<Mat> out(n_pts, zero);
  if (gt.relative.empty()) return out;

  const int max_shift = gt.relative.rbegin()->first;
  const int rel = truncation - gt.base_order;
  if (rel < 1 || rel > max_shift) {
    throw std::invalid_argument(
        "level-2 truncation outside the available hierarchy orders");
  }

  // The generator of the ratio series is (sum_s dGtilde^(s)/dt) times the
  // Neumann expansion of (1 + sum_s Gtilde^(s))^-1, collected by total
  // relative order and cut beyond `rel`. r[q] holds the expansion term of
  // order q; s_partial[q] the partial sums needed on the right of each
  // derivative factor.
  std::vector<std::vector<Mat>> r(rel + 1,
                                  std::vector<Mat>(n_pts, zero));
  for (int k = start; k < n_pts; ++k) r[0][k] = id;
  for (int q = 1; q <= rel; ++q) {
    for (const auto& [shift, series] : gt.relative) {
      if (shift > q) break;
      for (int k = start; k < n_pts; ++k) {
        r[q][k].noalias() -= series[k] * r[q - shift][k];
      }
    }
  }
  std::vector<std::vector<Mat>> s_partial(rel + 1,
                                          std::vector<Mat>(n_pts, zero));
  s_partial[0] = r[0];
  for (int q = 1; q <= rel; ++q) {
    for (int k = start; k < n_pts; ++k) {
      s_partial[q][k] = s_partial[q - 1][k] + r[q][k];
    }
  }

  for (const auto& [shift, series] : gt.relative) {
    if (shift > rel) break;
    const std::vector<Mat>& tail = s_partial[rel - shift];
    for (int k = start; k < n_pts; ++k) {
      const Mat d = stencil_derivative(series, start, k - start, m, grid.dt);
      out[k].noalias() += d * tail[k];
    }
  }
  return out;
}

ResummedGenerator resummed_generator(const std::vector<Mat>& base,
                                     const std::vector<Mat>& g2,
                                     const TimeGrid& grid, int start,
                                     const Mat& seed) {
  const int n_pts = grid.size();
  if (static_cast<int>(base.size()) != n_pts ||
      static_cast<int>(g2.size()) != n_pts) {
    throw std::invalid_argument("resummed generator: series do not match grid");
  }
  if (start < 0 || start >= n_pts) {
    throw std::invalid_argument("resummed generator: start outside the grid");
  }
  const Eigen::Index d2 = base[0].rows();
  const Mat id = Mat::Identity(d2, d2);
  const double dt = grid.dt;

  ResummedGenerator out;
  out.start = start;
  out.base = base;
  out.x.assign(n_pts, id);
  out.x[start] = seed;

  if (start + 1 < n_pts) {
    const std::vector<Mat> window(g2.begin() + start, g2.end());
    const std::vector<Mat> mid = midpoint_interpolate(window);
    for (int j = 0; start + j + 1 < n_pts; ++j) {
      const Mat& x = out.x[start + j];
      const Mat k1 = window[j] * x;
      const Mat k2 = mid[j] * (x + (0.5 * dt) * k1);
      const Mat k3 = mid[j] * (x + (0.5 * dt) * k2);
      const Mat k4 = window[j + 1] * (x + dt * k3);
      out.x[start + j + 1] = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }

  out.gnp.resize(n_pts);
  for (int k = 0; k < n_pts; ++k) out.gnp[k] = out.base[k] * out.x[k];
  return out;
}

ResummedGenerator resummed_generator(const std::vector<Mat>& base,
                                     const std::vector<Mat>& g2,
                                     const TimeGrid& grid, int start) {
  const Eigen::Index d2 = base.empty() ? 0 : base[0].rows();
  return resummed_generator(base, g2, grid, start, Mat::Identity(d2, d2));
}

}  // namespace tclme
