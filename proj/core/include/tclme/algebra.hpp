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

#ifndef TCLME_ALGEBRA_HPP
#define TCLME_ALGEBRA_HPP

#include <string>

#include "tclme/types.hpp"

namespace tclme {

// --- column-stacking vectorization ------------------------------------------
//
// vec stacks columns (Eigen's native storage order), so vec(A X B) =
// (B^T ⊗ A) vec(X). Superoperators are dense (d^2 x d^2) matrices acting on
// vec'd operators.

Vec vec(const Mat& a);
Mat unvec(const Vec& v, int rows, int cols);

Mat left_mult_superop(const Mat& a);   // X -> A X
Mat right_mult_superop(const Mat& b);  // X -> X B

// S^- : X -> (S X - X S)/sqrt(2)   and   S^+ : X -> (S X + X S)/sqrt(2).
// The 1/sqrt(2) keeps the two vertex channels on the same footing; every
// moment and generator formula in this library assumes it.
Mat commutator_superop(const Mat& s);
Mat anticommutator_superop(const Mat& s);

Mat apply_superop(const Mat& sop, const Mat& x);

double hermiticity_defect(const Mat& a);
bool is_hermitian(const Mat& a, double tol = 1e-12);
void require_hermitian(const Mat& a, const std::string& what, double tol = 1e-12);

// Frobenius distance between a superoperator and the one that maps X† -> (T X)†.
// Zero for maps that preserve Hermiticity.
double hermiticity_preservation_defect(const Mat& sop, int dim);

// Max |row vec(I)† · T| entry: zero for trace-annihilating superoperators,
// i.e. generators. For trace-preserving maps use the map variant below.
double trace_annihilation_defect(const Mat& sop, int dim);
double trace_preservation_defect(const Mat& map, int dim);

// --- matrix exponentials ------------------------------------------------------

Mat expm(const Mat& a);
Mat hermitian_propagator(const Mat& h, double t);  // exp(-i H t), H Hermitian

// --- interaction picture ------------------------------------------------------

Mat interaction_picture_op(const Mat& h, const Mat& op, double t);  // e^{iHt} op e^{-iHt}

// Caches the eigendecomposition of a Hermitian generator so picture rotations
// along a whole grid cost one small dense product each.
class InteractionPicture {
 public:
  explicit InteractionPicture(const Mat& h);

  Mat rotate(const Mat& op, double t) const;    // e^{iHt} op e^{-iHt}
  Mat unitary(double t) const;                  // e^{-iHt}
  int dim() const { return static_cast<int>(evals_.size()); }

 private:
  Eigen::VectorXd evals_;
  Mat evecs_;
};

// --- system model and state ---------------------------------------------------

struct SystemModel {
  Mat h;  // system Hamiltonian, Hermitian
  Mat s;  // coupling operator, Hermitian

  SystemModel(Mat h_in, Mat s_in);
  int dim() const { return static_cast<int>(h.rows()); }

  // Interaction-picture coupling operator and its two superoperator channels.
  Mat coupling_at(double t) const;
  Mat coupling_superop(Sign sign, double t) const;

 private:
  InteractionPicture picture_;
};

enum class Picture { interaction, schrodinger };

struct SystemState {
  Mat rho;
  Picture picture = Picture::interaction;
  double t = 0.0;

  int dim() const { return static_cast<int>(rho.rows()); }
  double trace_real() const { return rho.trace().real(); }
  double purity() const { return (rho * rho).trace().real(); }
};

// Throws with a description if rho is not a density matrix (trace within
// 1e-10 of one, Hermitian within 1e-12, eigenvalues above -1e-10).
void validate_density_matrix(const Mat& rho, const std::string& what);

// Rotates an interaction-picture state back to the Schrodinger picture.
SystemState to_schrodinger(const SystemState& state, const SystemModel& model);

}  // namespace tclme

#endif  // TCLME_ALGEBRA_HPP
