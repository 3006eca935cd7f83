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

#include "tclme/algebra.hpp"

#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace tclme {

Vec vec(const Mat& a) {
  return Eigen::Map<const Vec>(a.data(), a.size());
}

Mat unvec(const Vec& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols)
    throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

Mat left_mult_superop(const Mat& a) {
  const int d = static_cast<int>(a.rows());
  Mat id = Mat::Identity(d, d);
  return Eigen::kroneckerProduct(id, a);
}

Mat right_mult_superop(const Mat& b) {
  const int d = static_cast<int>(b.rows());
  Mat id = Mat::Identity(d, d);
  return Eigen::kroneckerProduct(b.transpose(), id);
}

Mat commutator_superop(const Mat& s) {
  return kInvSqrt2 * (left_mult_superop(s) - right_mult_superop(s));
}

Mat anticommutator_superop(const Mat& s) {
  return kInvSqrt2 * (left_mult_superop(s) + right_mult_superop(s));
}

Mat apply_superop(const Mat& sop, const Mat& x) {
  const int d = static_cast<int>(x.rows());
  return unvec(sop * vec(x), d, static_cast<int>(x.cols()));
}

double hermiticity_defect(const Mat& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& a, double tol) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

void require_hermitian(const Mat& a, const std::string& what, double tol) {
  if (a.rows() != a.cols())
    throw std::invalid_argument(what + " must be square");
  const double defect = hermiticity_defect(a);
  if (defect > tol)
    throw std::invalid_argument(what + " is not Hermitian (max deviation " +
                                std::to_string(defect) + ")");
}

double hermiticity_preservation_defect(const Mat& sop, int dim) {
  // T preserves Hermiticity iff T(X†)† = T(X) for all X; in vectorized form
  // that is conj(T) = P T P with P the vec-level transpose permutation.
  const int d2 = dim * dim;
  if (sop.rows() != d2 || sop.cols() != d2)
    throw std::invalid_argument("hermiticity_preservation_defect: dimension mismatch");
  Mat p = Mat::Zero(d2, d2);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) p(i + dim * j, j + dim * i) = 1.0;
  Mat lhs = sop.conjugate();
  Mat rhs = p * sop * p;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

double trace_annihilation_defect(const Mat& sop, int dim) {
  Vec tr = vec(Mat::Identity(dim, dim));
  return (tr.adjoint() * sop).cwiseAbs().maxCoeff();
}

double trace_preservation_defect(const Mat& map, int dim) {
  Vec tr = vec(Mat::Identity(dim, dim));
  return ((tr.adjoint() * map) - tr.adjoint()).cwiseAbs().maxCoeff();
}

Mat expm(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix must be square");
  return a.exp();
}

Mat hermitian_propagator(const Mat& h, double t) {
  require_hermitian(h, "hermitian_propagator input");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec phases = (-kImag * t * es.eigenvalues().array().cast<Cplx>()).exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat interaction_picture_op(const Mat& h, const Mat& op, double t) {
  Mat u = hermitian_propagator(h, -t);  // e^{+iHt}
  return u * op * u.adjoint();
}

InteractionPicture::InteractionPicture(const Mat& h) {
  require_hermitian(h, "interaction picture generator");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

Mat InteractionPicture::unitary(double t) const {
  Vec phases = (-kImag * t * evals_.array().cast<Cplx>()).exp();
  return evecs_ * phases.asDiagonal() * evecs_.adjoint();
}

Mat InteractionPicture::rotate(const Mat& op, double t) const {
  Mat u = unitary(-t);  // e^{+iHt}
  return u * op * u.adjoint();
}

SystemModel::SystemModel(Mat h_in, Mat s_in)
    : h(std::move(h_in)), s(std::move(s_in)), picture_(h) {
  require_hermitian(h, "system.hamiltonian");
  require_hermitian(s, "system.coupling");
  if (h.rows() != s.rows())
    throw std::invalid_argument("system.coupling dimension does not match system.hamiltonian");
}

Mat SystemModel::coupling_at(double t) const { return picture_.rotate(s, t); }

Mat SystemModel::coupling_superop(Sign sign, double t) const {
  Mat st = coupling_at(t);
  return sign == Sign::minus ? commutator_superop(st) : anticommutator_superop(st);
}

void validate_density_matrix(const Mat& rho, const std::string& what) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument(what + " must be square");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw std::invalid_argument(what + " must have unit trace");
  if (hermiticity_defect(rho) > 1e-12)
    throw std::invalid_argument(what + " must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument(what + " must be positive semidefinite");
}

SystemState to_schrodinger(const SystemState& state, const SystemModel& model) {
  if (state.picture == Picture::schrodinger) return state;
  Mat u = hermitian_propagator(model.h, state.t);  // e^{-iHt}
  SystemState out;
  out.rho = u * state.rho * u.adjoint();
  out.picture = Picture::schrodinger;
  out.t = state.t;
  return out;
}

}  // namespace tclme
