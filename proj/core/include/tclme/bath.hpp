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

#ifndef TCLME_BATH_HPP
#define TCLME_BATH_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tclme/types.hpp"

namespace tclme {

// --- spectral densities --------------------------------------------------------

struct SpectralDensity {
  enum class Kind { ohmic_exponential, drude_lorentz };
  Kind kind = Kind::ohmic_exponential;

  // ohmic_exponential: J(w) = eta * w * exp(-w / cutoff)
  double eta = 0.0;
  double cutoff = 0.0;

  // drude_lorentz: J(w) = 2 * reorg * width * w / (w^2 + width^2)
  double reorg = 0.0;
  double width = 0.0;

  double value(double omega) const;
  // Upper integration limit used by the quadrature route. The Drude-Lorentz
  // tail falls off only as 1/w, so values at tau = 0 depend on this hard
  // truncation; that is documented behavior, not an accident.
  double omega_max() const;
};

// Stationary bath autocorrelation C(tau) = <B(tau) B(0)> for the zero-mean
// part of the coupling operator, plus the (real) static mean of B kept apart.
// Stationarity gives C(-tau) = conj(C(tau)).
struct BathCorrelation {
  std::function<Cplx(double)> c;
  double beta = 0.0;  // inverse temperature; <= 0 means zero temperature
  double mean = 0.0;

  Cplx operator()(double tau) const { return c(tau); }
};

// Builds C(tau) = (1/pi) \int_0^inf dw J(w) [coth(beta w / 2) cos(w tau)
//                                            - i sin(w tau)].
// Zero-temperature Ohmic uses the closed form (eta/pi) wc^2 (1 + i wc tau)^-2;
// every other case integrates adaptively on (0, omega_max].
BathCorrelation correlation_from_spectral_density(const SpectralDensity& j, double beta,
                                                  double quad_tol = 1e-9);

// --- ordered two-vertex correlations -------------------------------------------
//
// D_{s2 s1}(t2, t1) = < B^{s2}(t2) B^{s1}(t1) >  on the ordered domain t2 >= t1,
// where B^± X = (B X ± X B)/sqrt(2). Tracing a commutator kills every component
// with s2 = '-', and the two survivors reduce to the scalar correlation:
//   D_{++} = 2 Re C(t2 - t1),   D_{+-} = 2i Im C(t2 - t1).
struct SuperCorrelation {
  std::function<Cplx(double)> c;

  Cplx component(Sign s2, Sign s1, double t2, double t1) const;
};

SuperCorrelation super_correlation(const BathCorrelation& corr);

// --- pair partitions and Wick sums ----------------------------------------------

// A perfect matching of {0, .., 2m-1}; each pair is stored (earlier slot,
// later slot) by index, i.e. pair.first < pair.second as indices.
struct PairPartition {
  std::vector<std::pair<int, int>> pairs;
};

// All (2m-1)!! matchings of 2m elements, deterministic order. n must be even
// and 2m <= 12.
std::vector<PairPartition> enumerate_pairings(int n);

// Gaussian (Wick) value of < B^{s_{n-1}}(t_{n-1}) ... B^{s_0}(t_0) > given the
// two-vertex correlation: sum over pair partitions of products of D. `sigmas`
// and `times` are index-aligned and ordered latest first (descending times);
// within each pair the later-time member supplies the left D argument. n even.
Cplx wick_multipoint(const SuperCorrelation& d, std::span<const Sign> sigmas,
                     std::span<const double> times);

// --- explicitly representable baths ---------------------------------------------

struct BathMode {
  enum class Kind { qubit, oscillator };
  Kind kind = Kind::qubit;
  double frequency = 0.0;
  double coupling = 0.0;
  int n_max = 6;  // oscillator truncation (levels 0..n_max)

  int dim() const { return kind == Kind::qubit ? 2 : n_max + 1; }
};

// A small bath kept in full: H_B = sum_i h_i, B = sum_i g_i x_i, with a
// thermal or ground initial state. Everything is evaluated through one cached
// eigendecomposition, so multipoint moments are exact (no stepping error).
class DiscreteBath {
 public:
  DiscreteBath(std::vector<BathMode> modes, double beta);  // beta <= 0: ground state

  int dim() const { return static_cast<int>(h_.rows()); }
  const Mat& hamiltonian() const { return h_; }
  const Mat& coupling() const { return b_; }
  const Mat& state() const { return rho_; }
  double beta() const { return beta_; }

  Mat coupling_at(double t) const;  // Heisenberg B(t)
  double mean() const;              // <B> in the initial state

  // Exact C(tau) = <B(tau) B(0)>; the initial state commutes with H_B, so this
  // is stationary by construction.
  Cplx correlation(double tau) const;
  BathCorrelation correlation_function() const;

  // < B^{s_{n-1}}(t_{n-1}) ... B^{s_0}(t_0) > with times strictly descending,
  // n <= 4. Throws on non-descending times. The quadrature engine uses the
  // relaxed entry point below, which admits ties (closed-simplex strata).
  Cplx exact_multipoint_moment(std::span<const Sign> sigmas,
                               std::span<const double> times) const;
  Cplx moment_allow_ties(std::span<const Sign> sigmas, std::span<const double> times) const;

  // Largest occupation of any oscillator's top level in the initial state;
  // used to confirm the truncation is adequate for a run.
  double top_level_population() const;

  // 2*pi / max mode frequency: the shortest single-mode recurrence. Oracle
  // comparisons stay below half of this.
  double shortest_recurrence() const;

 private:
  std::vector<BathMode> modes_;
  double beta_ = 0.0;
  Mat h_, b_, rho_;
  Eigen::VectorXd evals_;
  Mat evecs_;
  Mat b_eig_;    // coupling in the H_B eigenbasis
  Vec rho_eig_;  // state diagonal in the eigenbasis
};

}  // namespace tclme

#endif  // TCLME_BATH_HPP
