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

// Ordered-simplex quadrature for the moment series M^(n)(t) and its pinned
// derivative. The rule is the full-cube tensor trapezoid folded onto the
// simplex: a weakly descending index tuple carries the product of 1D
// trapezoid weights divided by the factorial of each tie group among the
// integration variables. Ties with the pinned top vertex get no correction
// (the top time is not an integration variable). This choice makes the
// discrete shuffle identities exact, e.g. Mdot^(4) = Mdot^(2) * M^(2) for
// commuting vertex factors, which the dephasing termination check relies on.

#include "tclme/tcl.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tclme/moments.hpp"

namespace tclme {
namespace {

constexpr std::array<Sign, 2> kSignByIndex{Sign::plus, Sign::minus};

// (-i)^n for the vertex expansion prefactor.
Cplx overall_phase(int n) {
  switch (n & 3) {
    case 0:
      return Cplx(1.0, 0.0);
    case 1:
      return Cplx(0.0, -1.0);
    case 2:
      return Cplx(-1.0, 0.0);
    default:
      return Cplx(0.0, 1.0);
  }
}

// 1D closed trapezoid weight on [t_0, t_k]. Degenerate interval -> 0.
double trap_w(int i, int k, double dt) {
  if (k <= 0) return 0.0;
  return (i == 0 || i == k) ? 0.5 * dt : dt;
}

struct VertexCache {
  std::vector<Mat> plus, minus;

  VertexCache(const SystemModel& model, const TimeGrid& grid) {
    const int n = grid.size();
    plus.reserve(n);
    minus.reserve(n);
    for (int k = 0; k < n; ++k) {
      plus.push_back(model.coupling_superop(Sign::plus, grid.time(k)));
      minus.push_back(model.coupling_superop(Sign::minus, grid.time(k)));
    }
  }

  const Mat& at(Sign s, int i) const {
    return s == Sign::plus ? plus[i] : minus[i];
  }
};

// Bath moment lookups keyed on grid separations. Sign arguments and combo
// indices refer to the SYSTEM labels of the vertices; the bath label of each
// vertex is the flipped one and the flip happens in here, so the assembly
// loops never touch it. Combo bit convention: most significant bit is the
// latest free vertex, bit value 0 = plus, 1 = minus.
class MomentAccessor {
 public:
  MomentAccessor(const BathMomentProvider& provider, const TimeGrid& grid,
                 Sign top_system)
      : provider_(provider),
        grid_(grid),
        top_bath_(flipped(top_system)),
        factorizable_(provider.wick_factorizable()) {
    if (!provider.stationary()) {
      throw std::invalid_argument(
          "moment quadrature requires a stationary bath provider");
    }
    if (factorizable_) {
      const int n = grid.size();
      dpp_.resize(n);
      dpm_.resize(n);
      for (int d = 0; d < n; ++d) {
        dpp_[d] = provider.pair_component(Sign::plus, Sign::plus,
                                          grid.time(d), grid.time(0));
        dpm_[d] = provider.pair_component(Sign::plus, Sign::minus,
                                          grid.time(d), grid.time(0));
      }
      m1_ = Cplx(0.0, 0.0);
    } else {
      const std::array<Sign, 1> s{top_bath_};
      const std::array<double, 1> t{grid.time(0)};
      m1_ = provider.moment(s, t);
    }
  }

  Cplx m1() const { return m1_; }

  // <B(t0 + a dt) B(t0)> with the listed system labels.
  Cplx m2(int a, Sign s1_system) {
    if (factorizable_) return pair(top_bath_, flipped(s1_system), a);
    auto it = cache2_.find(a);
    if (it == cache2_.end()) {
      std::array<Cplx, 2> vals;
      const std::array<double, 2> t{grid_.time(a), grid_.time(0)};
      for (int s1 = 0; s1 < 2; ++s1) {
        const std::array<Sign, 2> s{top_bath_, flipped(kSignByIndex[s1])};
        vals[s1] = provider_.moment(s, t);
      }
      it = cache2_.emplace(a, vals).first;
    }
    return it->second[s1_system == Sign::plus ? 0 : 1];
  }

  // Three-point values for separations (a, b): times are
  // (t0 + (a+b) dt, t0 + b dt, t0). Index = s2 * 2 + s1 over system labels.
  void m3(int a, int b, std::array<Cplx, 4>& out) {
    if (factorizable_) {
      out.fill(Cplx(0.0, 0.0));
      return;
    }
    const std::uint64_t key =
        static_cast<std::uint64_t>(a) | (static_cast<std::uint64_t>(b) << 21);
    auto it = cache3_.find(key);
    if (it == cache3_.end()) {
      std::array<Cplx, 4> vals;
      const std::array<double, 3> t{grid_.time(a + b), grid_.time(b),
                                    grid_.time(0)};
      for (int combo = 0; combo < 4; ++combo) {
        const std::array<Sign, 3> s{top_bath_,
                                    flipped(kSignByIndex[(combo >> 1) & 1]),
                                    flipped(kSignByIndex[combo & 1])};
        vals[combo] = provider_.moment(s, t);
      }
      it = cache3_.emplace(key, vals).first;
    }
    out = it->second;
  }

  // Four-point values for separations (a, b, c): times are
  // (t0 + (a+b+c) dt, t0 + (b+c) dt, t0 + c dt, t0).
  // Index = s3 * 4 + s2 * 2 + s1 over system labels.
  void m4(int a, int b, int c, std::array<Cplx, 8>& out) {
    if (factorizable_) {
      for (int s3 = 0; s3 < 2; ++s3) {
        const Sign b3 = flipped(kSignByIndex[s3]);
        for (int s2 = 0; s2 < 2; ++s2) {
          const Sign b2 = flipped(kSignByIndex[s2]);
          for (int s1 = 0; s1 < 2; ++s1) {
            const Sign b1 = flipped(kSignByIndex[s1]);
            out[s3 * 4 + s2 * 2 + s1] =
                pair(top_bath_, b3, a) * pair(b2, b1, c) +
                pair(top_bath_, b2, a + b) * pair(b3, b1, b + c) +
                pair(top_bath_, b1, a + b + c) * pair(b3, b2, b);
          }
        }
      }
      return;
    }
    const std::uint64_t key = static_cast<std::uint64_t>(a) |
                              (static_cast<std::uint64_t>(b) << 21) |
                              (static_cast<std::uint64_t>(c) << 42);
    auto it = cache4_.find(key);
    if (it == cache4_.end()) {
      std::array<Cplx, 8> vals;
      const std::array<double, 4> t{grid_.time(a + b + c), grid_.time(b + c),
                                    grid_.time(c), grid_.time(0)};
      for (int combo = 0; combo < 8; ++combo) {
        const std::array<Sign, 4> s{top_bath_,
                                    flipped(kSignByIndex[(combo >> 2) & 1]),
                                    flipped(kSignByIndex[(combo >> 1) & 1]),
                                    flipped(kSignByIndex[combo & 1])};
        vals[combo] = provider_.moment(s, t);
      }
      it = cache4_.emplace(key, vals).first;
    }
    out = it->second;
  }

 private:
  // Stationary pair component with bath labels; zero when the later label
  // is minus.
  Cplx pair(Sign later, Sign earlier, int separation) const {
    if (later == Sign::minus) return Cplx(0.0, 0.0);
    return earlier == Sign::plus ? dpp_[separation] : dpm_[separation];
  }

  const BathMomentProvider& provider_;
  const TimeGrid& grid_;
  Sign top_bath_;
  bool factorizable_;
  Cplx m1_{0.0, 0.0};
  std::vector<Cplx> dpp_, dpm_;
  std::unordered_map<int, std::array<Cplx, 2>> cache2_;
  std::unordered_map<std::uint64_t, std::array<Cplx, 4>> cache3_;
  std::unordered_map<std::uint64_t, std::array<Cplx, 8>> cache4_;
};

std::vector<Mat> cumulative_trapezoid(const std::vector<Mat>& f, double dt,
                                      const Mat& zero) {
  std::vector<Mat> out(f.size(), zero);
  for (std::size_t k = 1; k < f.size(); ++k) {
    out[k] = out[k - 1] + (0.5 * dt) * (f[k - 1] + f[k]);
  }
  return out;
}

}  // namespace

std::vector<MomentSeries> compute_moment_table(const SystemModel& model,
                                               const BathMomentProvider& bath,
                                               int n_max, const TimeGrid& grid,
                                               const MomentOptions& options) {
  if (n_max < 1 || n_max > 4) {
    throw std::invalid_argument("moment quadrature supports orders 1 to 4");
  }
  if (n_max > bath.max_order()) {
    throw std::invalid_argument(
        "bath moment provider does not supply the requested order");
  }

  const int n_pts = grid.size();
  const double dt = grid.dt;
  const Sign top =
      options.top_vertex_override > 0 ? Sign::plus : Sign::minus;
  const int d2 = model.dim() * model.dim();
  const Mat zero = Mat::Zero(d2, d2);

  VertexCache vx(model, grid);
  MomentAccessor mom(bath, grid, top);

  std::vector<MomentSeries> table(n_max);
  for (int n = 1; n <= n_max; ++n) {
    table[n - 1].order = n;
    table[n - 1].m.assign(n_pts, zero);
    table[n - 1].mdot.assign(n_pts, zero);
  }

  // Order 1. The derivative is the pinned vertex alone; the integral is its
  // running trapezoid, which coincides with the direct 1D rule.
  {
    MomentSeries& se = table[0];
    const Cplx f = overall_phase(1) * mom.m1();
    for (int k = 0; k < n_pts; ++k) se.mdot[k] = f * vx.at(top, k);
    se.m = cumulative_trapezoid(se.mdot, dt, zero);
  }

  // Order 2. The derivative pins the later vertex at t_k and integrates the
  // earlier one with closed trapezoid weights. The integral M^(2) uses the
  // direct simplex rule, assembled as a running trapezoid of the half-open
  // prefix sums R(j) plus a correction at the doubly-counted top corner.
  if (n_max >= 2) {
    MomentSeries& se = table[1];
    const Cplx ph = overall_phase(2);

    for (int k = 1; k < n_pts; ++k) {
      Mat inner = zero;
      for (int i = 0; i <= k; ++i) {
        const double w = trap_w(i, k, dt);
        for (int s1 = 0; s1 < 2; ++s1) {
          const Cplx c = mom.m2(k - i, kSignByIndex[s1]);
          if (c != Cplx(0.0, 0.0)) {
            inner += (w * c) * vx.at(kSignByIndex[s1], i);
          }
        }
      }
      se.mdot[k] = ph * (vx.at(top, k) * inner);
    }

    // R(j) integrates the earlier time over [t_0, t_j] with weight dt
    // everywhere except dt/2 at i = 0, and halves the coincident i = j
    // entry so that stacking R by an outer trapezoid reproduces the
    // tie-corrected simplex weights at every interior stratum.
    std::vector<Mat> r(n_pts, zero);
    for (int j = 0; j < n_pts; ++j) {
      Mat inner = zero;
      for (int i = 0; i <= j; ++i) {
        double w = (i == 0) ? 0.5 * dt : dt;
        if (i == j) w *= 0.5;
        for (int s1 = 0; s1 < 2; ++s1) {
          const Cplx c = mom.m2(j - i, kSignByIndex[s1]);
          if (c != Cplx(0.0, 0.0)) {
            inner += (w * c) * vx.at(kSignByIndex[s1], i);
          }
        }
      }
      r[j] = ph * (vx.at(top, j) * inner);
    }
    std::vector<Mat> stacked = cumulative_trapezoid(r, dt, zero);
    se.m[0] = zero;
    for (int k = 1; k < n_pts; ++k) {
      // The outer trapezoid gives the corner i1 = i2 = k weight dt^2/4;
      // the tie-corrected rule wants dt^2/8.
      Mat corner = zero;
      for (int s1 = 0; s1 < 2; ++s1) {
        const Cplx c = mom.m2(0, kSignByIndex[s1]);
        if (c != Cplx(0.0, 0.0)) corner += c * vx.at(kSignByIndex[s1], k);
      }
      corner = ph * (vx.at(top, k) * corner);
      se.m[k] = stacked[k] - (dt * dt / 8.0) * corner;
    }
  }

  // Order 3.
  if (n_max >= 3) {
    MomentSeries& se = table[2];
    const Cplx ph = overall_phase(3);
    std::array<Cplx, 4> mv;
    for (int k = 1; k < n_pts; ++k) {
      Mat acc = zero;
      for (int i2 = 0; i2 <= k; ++i2) {
        const double w2 = trap_w(i2, k, dt);
        std::array<Mat, 2> inner{zero, zero};
        bool any = false;
        for (int i1 = 0; i1 <= i2; ++i1) {
          double w = w2 * trap_w(i1, k, dt);
          if (i1 == i2) w *= 0.5;
          if (w == 0.0) continue;
          mom.m3(k - i2, i2 - i1, mv);
          for (int s2 = 0; s2 < 2; ++s2) {
            for (int s1 = 0; s1 < 2; ++s1) {
              const Cplx c = w * mv[s2 * 2 + s1];
              if (c != Cplx(0.0, 0.0)) {
                inner[s2] += c * vx.at(kSignByIndex[s1], i1);
                any = true;
              }
            }
          }
        }
        if (!any) continue;
        for (int s2 = 0; s2 < 2; ++s2) {
          acc.noalias() += vx.at(kSignByIndex[s2], i2) * inner[s2];
        }
      }
      se.mdot[k] = ph * (vx.at(top, k) * acc);
    }
    se.m = cumulative_trapezoid(se.mdot, dt, zero);
  }

  // Order 4. The inner pair (i2, i1) is shared across the two free labels of
  // the third vertex, so the loop keeps one accumulator per s3 and multiplies
  // by the cached vertex product of the inner pair.
  if (n_max >= 4) {
    MomentSeries& se = table[3];
    const Cplx ph = overall_phase(4);

    // Cache of S^{s2}(i2) S^{s1}(i1) for all ordered pairs when it fits.
    const bool cache_pairs =
        d2 <= 4 && n_pts <= 512;
    std::vector<Mat> pair_cache;
    if (cache_pairs) {
      pair_cache.resize(static_cast<std::size_t>(n_pts) * (n_pts + 1) / 2 * 4);
      for (int i2 = 0; i2 < n_pts; ++i2) {
        for (int i1 = 0; i1 <= i2; ++i1) {
          const std::size_t base =
              (static_cast<std::size_t>(i2) * (i2 + 1) / 2 + i1) * 4;
          for (int s2 = 0; s2 < 2; ++s2) {
            for (int s1 = 0; s1 < 2; ++s1) {
              pair_cache[base + s2 * 2 + s1] =
                  vx.at(kSignByIndex[s2], i2) * vx.at(kSignByIndex[s1], i1);
            }
          }
        }
      }
    }

    std::array<Cplx, 8> mv;
    std::array<Mat, 4> scratch;
    for (int k = 1; k < n_pts; ++k) {
      Mat acc = zero;
      for (int i3 = 0; i3 <= k; ++i3) {
        const double w3 = trap_w(i3, k, dt);
        if (w3 == 0.0) continue;
        std::array<Mat, 2> inner{zero, zero};
        bool any = false;
        for (int i2 = 0; i2 <= i3; ++i2) {
          const double w32 = w3 * trap_w(i2, k, dt);
          if (w32 == 0.0) continue;
          for (int i1 = 0; i1 <= i2; ++i1) {
            double w = w32 * trap_w(i1, k, dt);
            if (w == 0.0) continue;
            if (i3 == i2 && i2 == i1) {
              w /= 6.0;
            } else if (i3 == i2 || i2 == i1) {
              w /= 2.0;
            }
            mom.m4(k - i3, i3 - i2, i2 - i1, mv);
            const Mat* pairs;
            if (cache_pairs) {
              pairs = &pair_cache[(static_cast<std::size_t>(i2) * (i2 + 1) /
                                       2 +
                                   i1) *
                                  4];
            } else {
              for (int s2 = 0; s2 < 2; ++s2) {
                for (int s1 = 0; s1 < 2; ++s1) {
                  scratch[s2 * 2 + s1] = vx.at(kSignByIndex[s2], i2) *
                                         vx.at(kSignByIndex[s1], i1);
                }
              }
              pairs = scratch.data();
            }
            for (int s3 = 0; s3 < 2; ++s3) {
              for (int c = 0; c < 4; ++c) {
                const Cplx coeff = w * mv[s3 * 4 + c];
                if (coeff != Cplx(0.0, 0.0)) {
                  inner[s3] += coeff * pairs[c];
                  any = true;
                }
              }
            }
          }
        }
        if (!any) continue;
        for (int s3 = 0; s3 < 2; ++s3) {
          acc.noalias() += vx.at(kSignByIndex[s3], i3) * inner[s3];
        }
      }
      se.mdot[k] = ph * (vx.at(top, k) * acc);
    }
    se.m = cumulative_trapezoid(se.mdot, dt, zero);
  }

  return table;
}

MomentSeries compute_moment(const SystemModel& model,
                            const BathMomentProvider& bath, int n,
                            const TimeGrid& grid) {
  auto table = compute_moment_table(model, bath, n, grid);
  return std::move(table[static_cast<std::size_t>(n) - 1]);
}

MomentSeries compute_moment_derivative(const SystemModel& model,
                                       const BathMomentProvider& bath, int n,
                                       const TimeGrid& grid) {
  return compute_moment(model, bath, n, grid);
}

}  // namespace tclme
