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

#ifndef TCLME_ORACLE_HPP_
#define TCLME_ORACLE_HPP_

#include <vector>

#include "tclme/algebra.hpp"
#include "tclme/bath.hpp"
#include "tclme/grid.hpp"
#include "tclme/resummation.hpp"
#include "tclme/types.hpp"

namespace tclme {

// System and discrete bath kept whole: H = H_S x 1 + 1 x H_B + lambda S x B,
// composite basis ordered system-major (index s * dim_b + b). One cached
// eigendecomposition serves every propagation, so results carry no stepping
// error.
class FullModel {
 public:
  FullModel(SystemModel system, DiscreteBath bath, double lambda);

  int dim_s() const { return system_.dim(); }
  int dim_b() const { return bath_.dim(); }
  int dim() const { return static_cast<int>(h_.rows()); }
  double lambda() const { return lambda_; }
  const SystemModel& system() const { return system_; }
  const DiscreteBath& bath() const { return bath_; }
  const Mat& hamiltonian() const { return h_; }
  const Mat& coupling() const { return sb_; }  // S x B, without lambda

  Mat embed_system(const Mat& a) const;       // A x 1_B
  Mat product_state(const Mat& rho_s) const;  // rho_s x rho_B

  // U(t) x U(t)^dagger; x need not be Hermitian (tomography runs matrix
  // units through this).
  Mat evolve(const Mat& x, double t) const;

 private:
  SystemModel system_;
  DiscreteBath bath_;
  double lambda_ = 1.0;
  Mat h_, sb_;
  Eigen::VectorXd evals_;
  Mat evecs_;
};

// Reduce a composite operator to the system factor.
Mat partial_trace_bath(const Mat& x, int dim_s, int dim_b);

// Interaction-picture reduced map on a grid, with the closed-form time
// derivative (no finite differencing) and the generator Ldot pinv(L).
struct ExactMap {
  TimeGrid grid{0.0, 1.0, 1};
  std::vector<Mat> lambda;
  std::vector<Mat> lambda_dot;
  std::vector<Mat> g;
  std::vector<PinvInfo> pinv_info;
};

ExactMap exact_dynamical_map(const FullModel& full, const TimeGrid& grid,
                             double svd_cutoff = 1e-10);

// Schrodinger-picture system maps from an interaction-picture map series:
// L_sch(t) = (conj(U) x U) L(t) with U = exp(-i H_S t).
std::vector<Mat> schrodinger_maps(const std::vector<Mat>& lambda,
                                  const SystemModel& system,
                                  const TimeGrid& grid);

// <A(t2) B(t1) C(0)> in the full model, Schrodinger picture, operators
// inserted from the left. Two-point values are the C = 1, t1 = 0 case.
Cplx exact_three_point(const FullModel& full, const Mat& rho_s0, const Mat& a,
                       const Mat& b, const Mat& c, double t2, double t1);
Cplx exact_two_point(const FullModel& full, const Mat& rho_s0, const Mat& a,
                     const Mat& b, double t);

// Factorized counterparts through Schrodinger-picture system maps:
// <A(t2) B(t1) C(0)> ~ Tr{A L(t2, t1)[B L(t1, 0)[C rho_s0]]} with the
// two-time map L(t2, t1) = L(t2) L(t1)^-1.
Cplx factorized_three_point(const std::vector<Mat>& maps, const Mat& rho_s0,
                            const Mat& a, const Mat& b, const Mat& c, int k2,
                            int k1);
Cplx factorized_two_point(const std::vector<Mat>& maps, const Mat& rho_s0,
                          const Mat& a, const Mat& b, int k);

// Half the shortest bath recurrence; comparisons against the reduced
// description stay below this horizon.
double recurrence_window(const DiscreteBath& bath);

}  // namespace tclme

#endif  // TCLME_ORACLE_HPP_
