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

#ifndef TCLME_TESTS_HELPERS_HPP_
#define TCLME_TESTS_HELPERS_HPP_

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "tclme/types.hpp"

namespace tclme::testing {

inline Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Mat pauli_y() {
  Mat m(2, 2);
  m << 0, Cplx(0, -1), Cplx(0, 1), 0;
  return m;
}

inline Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Mat plus_state() {
  Mat m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return m;
}

inline Mat ground_state() {
  Mat m = Mat::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

// Deterministic complex matrix with entries uniform in the unit square.
inline Mat random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = Cplx(u(rng), u(rng));
  }
  return m;
}

inline Mat random_hermitian(std::mt19937_64& rng, int n) {
  const Mat a = random_matrix(rng, n, n);
  return 0.5 * (a + a.adjoint());
}

inline Mat random_density(std::mt19937_64& rng, int n) {
  const Mat a = random_matrix(rng, n, n);
  Mat rho = a * a.adjoint();
  rho /= rho.trace().real();
  return rho;
}

// Zero-temperature Ohmic dephasing exponent, independently of the library's
// bath code: Gamma(t) = (4 eta / pi) \int_0^inf dw e^{-w/wc} (1 - cos wt) / w,
// evaluated by adaptive Gauss-Kronrod on the spectral side.
inline double dephasing_exponent(double eta, double cutoff, double t) {
  namespace bq = boost::math::quadrature;
  const auto integrand = [&](double w) {
    if (w < 1e-300) return 0.0;
    return std::exp(-w / cutoff) * (1.0 - std::cos(w * t)) / w;
  };
  const double val = bq::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, std::numeric_limits<double>::infinity(), 12, 1e-12);
  return 4.0 * eta / kPi * val;
}

inline double max_diff(const std::vector<Mat>& a, const std::vector<Mat>& b) {
  double d = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    d = std::max(d, (a[k] - b[k]).cwiseAbs().maxCoeff());
  }
  return d;
}

inline double max_norm(const std::vector<Mat>& a) {
  double d = 0.0;
  for (const Mat& m : a) d = std::max(d, m.norm());
  return d;
}

}  // namespace tclme::testing

#endif  // TCLME_TESTS_HELPERS_HPP_
