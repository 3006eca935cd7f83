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

#include "tclme/bath.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/KroneckerProduct>

namespace tclme {

double SpectralDensity::value(double omega) const {
  switch (kind) {
    case Kind::ohmic_exponential:
      return eta * omega * std::exp(-omega / cutoff);
    case Kind::drude_lorentz:
      return 2.0 * reorg * width * omega / (omega * omega + width * width);
  }
  return 0.0;
}

double SpectralDensity::omega_max() const {
  return 40.0 * (kind == Kind::ohmic_exponential ? cutoff : width);
}

namespace {

double coth_half(double beta, double omega) {
  if (beta <= 0.0) return 1.0;
  return 1.0 / std::tanh(0.5 * beta * omega);
}

}  // namespace

BathCorrelation correlation_from_spectral_density(const SpectralDensity& j, double beta,
                                                  double quad_tol) {
  if (j.kind == SpectralDensity::Kind::ohmic_exponential) {
    if (j.eta < 0.0 || j.cutoff <= 0.0)
      throw std::invalid_argument("ohmic spectral density needs eta >= 0 and cutoff > 0");
  } else {
    if (j.reorg < 0.0 || j.width <= 0.0)
      throw std::invalid_argument("drude-lorentz spectral density needs reorg >= 0 and width > 0");
  }

  BathCorrelation corr;
  corr.beta = beta;
  corr.mean = 0.0;

  if (j.kind == SpectralDensity::Kind::ohmic_exponential && beta <= 0.0) {
    // (1/pi) \int_0^inf eta w e^{-w/wc} e^{-i w tau} dw = (eta/pi) wc^2 (1 + i wc tau)^{-2}
    const double eta = j.eta, wc = j.cutoff;
    corr.c = [eta, wc](double tau) {
      Cplx z = 1.0 + kImag * (wc * tau);
      return (eta / kPi) * wc * wc / (z * z);
    };
    return corr;
  }

  const double wmax = j.omega_max();
  const SpectralDensity jd = j;
  corr.c = [jd, beta, wmax, quad_tol](double tau) {
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto re = [&](double w) { return jd.value(w) * coth_half(beta, w) * std::cos(w * tau); };
    auto im = [&](double w) { return -jd.value(w) * std::sin(w * tau); };
    double r = gk::integrate(re, 0.0, wmax, 12, quad_tol);
    double i = gk::integrate(im, 0.0, wmax, 12, quad_tol);
    return Cplx(r / kPi, i / kPi);
  };
  return corr;
}

Cplx SuperCorrelation::component(Sign s2, Sign s1, double t2, double t1) const {
  // Left commutator vertex traces to zero for any state.
  if (s2 == Sign::minus) return 0.0;
  Cplx cv = c(t2 - t1);
  if (s1 == Sign::plus) return 2.0 * cv.real();
  return Cplx(0.0, 2.0 * cv.imag());
}

SuperCorrelation super_correlation(const BathCorrelation& corr) {
  return SuperCorrelation{corr.c};
}

namespace {

void pairings_rec(std::vector<int>& slots, std::vector<std::pair<int, int>>& current,
                  std::vector<PairPartition>& out) {
  if (slots.empty()) {
    out.push_back(PairPartition{current});
    return;
  }
  int first = slots.front();
  for (std::size_t k = 1; k < slots.size(); ++k) {
    int partner = slots[k];
    std::vector<int> rest;
    rest.reserve(slots.size() - 2);
    for (std::size_t m = 1; m < slots.size(); ++m)
      if (m != k) rest.push_back(slots[m]);
    current.emplace_back(first, partner);
    pairings_rec(rest, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<PairPartition> enumerate_pairings(int n) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("enumerate_pairings: n must be positive and even");
  if (n > 12) throw std::invalid_argument("enumerate_pairings: n must be <= 12");
  std::vector<int> slots(n);
  for (int i = 0; i < n; ++i) slots[i] = i;
  std::vector<PairPartition> out;
  std::vector<std::pair<int, int>> current;
  pairings_rec(slots, current, out);
  return out;
}

Cplx wick_multipoint(const SuperCorrelation& d, std::span<const Sign> sigmas,
                     std::span<const double> times) {
  const int n = static_cast<int>(sigmas.size());
  if (n % 2 != 0 || n == 0) throw std::invalid_argument("wick_multipoint: n must be positive and even");
  if (times.size() != sigmas.size())
    throw std::invalid_argument("wick_multipoint: sigmas/times length mismatch");
  for (int i = 0; i + 1 < n; ++i)
    if (times[i] < times[i + 1]) throw std::invalid_argument("wick_multipoint: non-descending times");

  // Index 0 is the latest time, so within a pair (a, b) with a < b the slot a
  // provides the later (left) argument of D.
  Cplx sum = 0.0;
  for (const PairPartition& p : enumerate_pairings(n)) {
    Cplx prod = 1.0;
    for (auto [a, b] : p.pairs)
      prod *= d.component(sigmas[a], sigmas[b], times[a], times[b]);
    sum += prod;
  }
  return sum;
}

// --- DiscreteBath ----------------------------------------------------------------

namespace {

Mat qubit_h(double freq) {
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = 0.5 * freq;
  h(1, 1) = -0.5 * freq;
  return h;
}

Mat qubit_x() {
  Mat x = Mat::Zero(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  return x;
}

Mat oscillator_h(double freq, int n_max) {
  Mat h = Mat::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) h(n, n) = freq * n;
  return h;
}

Mat oscillator_x(int n_max) {
  Mat x = Mat::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n + 1 <= n_max; ++n) {
    x(n, n + 1) = std::sqrt(n + 1.0);
    x(n + 1, n) = std::sqrt(n + 1.0);
  }
  return x;
}

Mat embed(const Mat& op, const std::vector<int>& dims, int which) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    Mat factor = (static_cast<int>(i) == which) ? op : Mat::Identity(dims[i], dims[i]);
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

}  // namespace

DiscreteBath::DiscreteBath(std::vector<BathMode> modes, double beta)
    : modes_(std::move(modes)), beta_(beta) {
  if (modes_.empty()) throw std::invalid_argument("bath.modes must not be empty");
  std::vector<int> dims;
  long total = 1;
  for (const auto& m : modes_) {
    if (m.frequency <= 0.0) throw std::invalid_argument("bath mode frequency must be positive");
    if (m.kind == BathMode::Kind::oscillator && m.n_max < 1)
      throw std::invalid_argument("oscillator n_max must be at least 1");
    dims.push_back(m.dim());
    total *= m.dim();
    if (total > 256) throw std::invalid_argument("bath dimension exceeds 256");
  }

  const int d = static_cast<int>(total);
  h_ = Mat::Zero(d, d);
  b_ = Mat::Zero(d, d);
  for (int i = 0; i < static_cast<int>(modes_.size()); ++i) {
    const auto& m = modes_[i];
    Mat hi = (m.kind == BathMode::Kind::qubit) ? qubit_h(m.frequency)
                                               : oscillator_h(m.frequency, m.n_max);
    Mat xi = (m.kind == BathMode::Kind::qubit) ? qubit_x() : oscillator_x(m.n_max);
    h_ += embed(hi, dims, i);
    b_ += m.coupling * embed(xi, dims, i);
  }

  Eigen::SelfAdjointEigenSolver<Mat> es(h_);
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
  b_eig_ = evecs_.adjoint() * b_ * evecs_;

  rho_eig_ = Vec::Zero(d);
  if (beta_ <= 0.0) {
    // Ground state; split evenly over a degenerate ground level.
    const double e0 = evals_.minCoeff();
    int count = 0;
    for (int m = 0; m < d; ++m)
      if (evals_(m) - e0 < 1e-12) ++count;
    for (int m = 0; m < d; ++m)
      if (evals_(m) - e0 < 1e-12) rho_eig_(m) = 1.0 / count;
  } else {
    const double e0 = evals_.minCoeff();
    double z = 0.0;
    for (int m = 0; m < d; ++m) z += std::exp(-beta_ * (evals_(m) - e0));
    for (int m = 0; m < d; ++m) rho_eig_(m) = std::exp(-beta_ * (evals_(m) - e0)) / z;
  }
  rho_ = evecs_ * rho_eig_.asDiagonal() * evecs_.adjoint();
}

Mat DiscreteBath::coupling_at(double t) const {
  const int d = dim();
  Mat bt(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      bt(m, n) = b_eig_(m, n) * std::exp(kImag * ((evals_(m) - evals_(n)) * t));
  return evecs_ * bt * evecs_.adjoint();
}

double DiscreteBath::mean() const {
  Cplx m = 0.0;
  for (int k = 0; k < dim(); ++k) m += rho_eig_(k) * b_eig_(k, k);
  return m.real();
}

Cplx DiscreteBath::correlation(double tau) const {
  // <B(tau) B(0)> in the eigenbasis; the full (uncentered) value.
  Cplx sum = 0.0;
  for (int m = 0; m < dim(); ++m)
    for (int n = 0; n < dim(); ++n)
      sum += rho_eig_(m) * b_eig_(m, n) * b_eig_(n, m) *
             std::exp(kImag * ((evals_(m) - evals_(n)) * tau));
  return sum;
}

BathCorrelation DiscreteBath::correlation_function() const {
  const double mu = mean();
  BathCorrelation corr;
  corr.beta = beta_;
  corr.mean = mu;
  // Capture a copy so the closure stays valid past the bath that made it.
  corr.c = [bath = *this, mu](double tau) { return bath.correlation(tau) - mu * mu; };
  return corr;
}

Cplx DiscreteBath::moment_allow_ties(std::span<const Sign> sigmas,
                                     std::span<const double> times) const {
  const int n = static_cast<int>(sigmas.size());
  if (n < 1 || n > 4)
    throw std::invalid_argument("multipoint moments supported up to n = 4");
  if (times.size() != sigmas.size())
    throw std::invalid_argument("multipoint moment: sigmas/times length mismatch");
  for (int i = 0; i + 1 < n; ++i)
    if (times[i] < times[i + 1])
      throw std::invalid_argument("multipoint moment: non-descending times");

  const int d = dim();
  // Work in the eigenbasis where the state is diagonal and B(t) is a phase
  // dressing of b_eig_; the trace is basis independent.
  Mat x = rho_eig_.asDiagonal();
  Mat bt(d, d);
  for (int v = n - 1; v >= 0; --v) {
    const double t = times[v];
    for (int m = 0; m < d; ++m)
      for (int c = 0; c < d; ++c)
        bt(m, c) = b_eig_(m, c) * std::exp(kImag * ((evals_(m) - evals_(c)) * t));
    if (sigmas[v] == Sign::plus)
      x = kInvSqrt2 * (bt * x + x * bt);
    else
      x = kInvSqrt2 * (bt * x - x * bt);
  }
  return x.trace();
}

Cplx DiscreteBath::exact_multipoint_moment(std::span<const Sign> sigmas,
                                           std::span<const double> times) const {
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (times[i] <= times[i + 1])
      throw std::invalid_argument("exact_multipoint_moment: non-descending times");
  return moment_allow_ties(sigmas, times);
}

double DiscreteBath::top_level_population() const {
  double worst = 0.0;
  std::vector<int> dims;
  for (const auto& m : modes_) dims.push_back(m.dim());
  for (int i = 0; i < static_cast<int>(modes_.size()); ++i) {
    if (modes_[i].kind != BathMode::Kind::oscillator) continue;
    Mat proj = Mat::Zero(dims[i], dims[i]);
    proj(dims[i] - 1, dims[i] - 1) = 1.0;
    Mat p = embed(proj, dims, i);
    worst = std::max(worst, (p * rho_).trace().real());
  }
  return worst;
}

double DiscreteBath::shortest_recurrence() const {
  double wmax = 0.0;
  for (const auto& m : modes_) wmax = std::max(wmax, m.frequency);
  return 2.0 * kPi / wmax;
}

}  // namespace tclme
