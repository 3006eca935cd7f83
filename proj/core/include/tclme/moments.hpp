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

#ifndef TCLME_MOMENTS_HPP_
#define TCLME_MOMENTS_HPP_

#include <memory>
#include <span>

#include "tclme/bath.hpp"
#include "tclme/types.hpp"

namespace tclme {

// Uniform source of bath vertex moments <B^{s_n}(t_n) ... B^{s_1}(t_1)>_B for
// the quadrature engine. Signs are the bath-side superoperator labels and
// times are weakly descending (coincident times appear on the closed
// integration domain).
class BathMomentProvider {
 public:
  virtual ~BathMomentProvider() = default;

  virtual Cplx moment(std::span<const Sign> sigmas, std::span<const double> times) const = 0;

  // Largest n the provider supplies.
  virtual int max_order() const = 0;

  // <B> in the bath state.
  virtual double mean() const = 0;

  // Moments depend on time differences only.
  virtual bool stationary() const = 0;

  // Even moments are sums over pair partitions of two-point components and
  // centered odd moments vanish; enables the engine's inline pair path.
  virtual bool wick_factorizable() const = 0;

  // Two-point component for the pair path; only meaningful when
  // wick_factorizable() is true.
  virtual Cplx pair_component(Sign s2, Sign s1, double t2, double t1) const;
};

// Gaussian bath: moments from the two-point SuperCorrelation via Wick
// pairings, with mean insertions on '+' slots when <B> != 0.
class GaussianBathMoments : public BathMomentProvider {
 public:
  GaussianBathMoments(const BathCorrelation& corr);

  Cplx moment(std::span<const Sign> sigmas, std::span<const double> times) const override;
  int max_order() const override { return 4; }
  double mean() const override { return mean_; }
  bool stationary() const override { return true; }
  bool wick_factorizable() const override { return mean_ == 0.0; }
  Cplx pair_component(Sign s2, Sign s1, double t2, double t1) const override;

 private:
  SuperCorrelation d_;
  double mean_;
};

// Exact moments of a discrete bath; non-Gaussian in general.
class DiscreteBathMoments : public BathMomentProvider {
 public:
  explicit DiscreteBathMoments(std::shared_ptr<const DiscreteBath> bath);

  Cplx moment(std::span<const Sign> sigmas, std::span<const double> times) const override;
  int max_order() const override { return 4; }
  double mean() const override { return bath_->mean(); }
  bool stationary() const override { return true; }
  bool wick_factorizable() const override { return false; }

  const DiscreteBath& bath() const { return *bath_; }

 private:
  std::shared_ptr<const DiscreteBath> bath_;
};

}  // namespace tclme

#endif  // TCLME_MOMENTS_HPP_
