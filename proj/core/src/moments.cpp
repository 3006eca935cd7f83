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

#include "tclme/moments.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tclme {

Cplx BathMomentProvider::pair_component(Sign, Sign, double, double) const {
  throw std::logic_error("pair components unavailable for this provider");
}

GaussianBathMoments::GaussianBathMoments(const BathCorrelation& corr)
    : d_(super_correlation(corr)), mean_(corr.mean) {}

Cplx GaussianBathMoments::pair_component(Sign s2, Sign s1, double t2, double t1) const {
  return d_.component(s2, s1, t2, t1);
}

Cplx GaussianBathMoments::moment(std::span<const Sign> sigmas,
                                 std::span<const double> times) const {
  const int n = static_cast<int>(sigmas.size());
  if (n < 1 || n > max_order())
    throw std::invalid_argument("gaussian moments supported up to n = 4");
  if (times.size() != sigmas.size())
    throw std::invalid_argument("gaussian moment: sigmas/times length mismatch");
  for (int i = 0; i + 1 < n; ++i)
    if (times[i] < times[i + 1])
      throw std::invalid_argument("gaussian moment: non-descending times");

  // Split B into fluctuation plus mean: each '+' slot may contribute sqrt(2)<B>
  // while the remaining slots form a centered Wick moment. With <B> = 0 only
  // the fully contracted term survives.
  const double vertex_mean = std::sqrt(2.0) * mean_;
  Cplx total = 0.0;
  const unsigned n_masks = (mean_ != 0.0) ? (1u << n) : 1u;
  std::vector<Sign> rest_s;
  std::vector<double> rest_t;
  for (unsigned mask = 0; mask < n_masks; ++mask) {
    bool ok = true;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) ok = ok && sigmas[i] == Sign::plus;
    if (!ok) continue;
    const int taken = std::popcount(mask);
    const int rest = n - taken;
    if (rest % 2 != 0) continue;  // centered odd moments vanish

    Cplx term = std::pow(vertex_mean, taken);
    if (rest > 0) {
      rest_s.clear();
      rest_t.clear();
      for (int i = 0; i < n; ++i) {
        if ((mask >> i) & 1u) continue;
        rest_s.push_back(sigmas[i]);
        rest_t.push_back(times[i]);
      }
      term *= wick_multipoint(d_, rest_s, rest_t);
    }
    total += term;
  }
  return total;
}

DiscreteBathMoments::DiscreteBathMoments(std::shared_ptr<const DiscreteBath> bath)
    : bath_(std::move(bath)) {
  if (!bath_) throw std::invalid_argument("discrete bath moments need a bath");
}

Cplx DiscreteBathMoments::moment(std::span<const Sign> sigmas,
                                 std::span<const double> times) const {
  return bath_->moment_allow_ties(sigmas, times);
}

}  // namespace tclme
