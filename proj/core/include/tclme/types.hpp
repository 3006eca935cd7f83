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

#ifndef TCLME_TYPES_HPP
#define TCLME_TYPES_HPP

#include <complex>
#include <Eigen/Dense>

namespace tclme {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Vertex sign for the two superoperator channels: plus = anticommutator,
// minus = commutator. System and bath vertices always carry opposite signs.
enum class Sign : int { plus = +1, minus = -1 };

inline Sign flipped(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

inline constexpr double kInvSqrt2 = 0.7071067811865476;
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr Cplx kImag{0.0, 1.0};

}  // namespace tclme

#endif  // TCLME_TYPES_HPP
