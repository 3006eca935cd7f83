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

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/KroneckerProduct>

#include "tclme/oracle.hpp"

namespace tclme {

FullModel::FullModel(SystemModel system, DiscreteBath bath, double lambda)
    : system_(std::move(system)), bath_(std::move(bath)), lambda_(lambda) {
  const int ds = system_.dim();
  const int db = bath_.dim();
  if (ds * db > 256) {
    throw std::invalid_argument("full model dimension exceeds 256");
  }
  const Mat id_s = Mat::Identity(ds, ds);
  const Mat id_b = Mat::Identity(db, db);
  sb_ = Eigen::kroneckerProduct(system_.s, bath_.coupling());
  h_ = Eigen::kroneckerProduct(system_.h, id_b) +
       Eigen::kroneckerProduct(id_s, bath_.hamiltonian()) + lambda_ * sb_;
  require_hermitian(h_, "full model hamiltonian");

  Eigen::SelfAdjointEigenSolver<Mat> es(h_);
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

Mat FullModel::embed_system(const Mat& a) const {
  return Eigen::kroneckerProduct(a, Mat::Identity(dim_b(), dim_b()));
}

Mat FullModel::product_state(const Mat& rho_s) const {
  return Eigen::kroneckerProduct(rho_s, bath_.state());
}

Mat FullModel::evolve(const Mat& x, double t) const {
  const int d = dim();
  Vec phase(d);
  for (int m = 0; m < d; ++m) {
    phase(m) = std::exp(Cplx(0.0, -evals_(m) * t));
  }
  const Mat in_eig = evecs_.adjoint() * x * evecs_;
  const Mat turned =
      phase.asDiagonal() * in_eig * phase.conjugate().asDiagonal();
  return evecs_ * turned * evecs_.adjoint();
}

Mat partial_trace_bath(const Mat& x, int dim_s, int dim_b) {
  if (x.rows() != dim_s * dim_b || x.cols() != dim_s * dim_b) {
    throw std::invalid_argument("partial trace: dimensions do not match");
  }
  Mat out = Mat::Zero(dim_s, dim_s);
  for (int i = 0; i < dim_s; ++i) {
    for (int j = 0; j < dim_s; ++j) {
      Cplx sum(0.0, 0.0);
      for (int b = 0; b < dim_b; ++b) {
        sum += x(i * dim_b + b, j * dim_b + b);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

ExactMap exact_dynamical_map(const FullModel& full, const TimeGrid& grid,
                             double svd_cutoff) {
  const int ds = full.dim_s();
  const int db = full.dim_b();
  const int d2 = ds * ds;
  const int n_pts = grid.size();
  const InteractionPicture sys_picture(full.system().h);
  const Cplx minus_i_lambda(0.0, -full.lambda());

  ExactMap out;
  out.grid = grid;
  out.lambda.assign(n_pts, Mat::Zero(d2, d2));
  out.lambda_dot.assign(n_pts, Mat::Zero(d2, d2));
  out.g.reserve(n_pts);
  out.pinv_info.reserve(n_pts);

  // Tomography inputs: matrix units of the system tensored with the bath
  // state. Column v of the map is the evolved image of unvec(e_v).
  std::vector<Mat> units(d2);
  for (int v = 0; v < d2; ++v) {
    Mat e = Mat::Zero(ds, ds);
    e(v % ds, v / ds) = Cplx(1.0, 0.0);
    units[v] = full.product_state(e);
  }

  for (int k = 0; k < n_pts; ++k) {
    const double t = grid.time(k);
    for (int v = 0; v < d2; ++v) {
      const Mat rho_tot = full.evolve(units[v], t);
      const Mat rho_s = partial_trace_bath(rho_tot, ds, db);
      out.lambda[k].col(v) = vec(sys_picture.rotate(rho_s, t));

      const Mat comm =
          full.coupling() * rho_tot - rho_tot * full.coupling();
      const Mat dot_s = partial_trace_bath(comm, ds, db);
      out.lambda_dot[k].col(v) =
          minus_i_lambda * vec(sys_picture.rotate(dot_s, t));
    }
    PinvInfo info;
    const Mat pinv = regularized_inverse(out.lambda[k], svd_cutoff, &info);
    out.g.push_back(out.lambda_dot[k] * pinv);
    out.pinv_info.push_back(info);
  }
  return out;
}

std::vector<Mat> schrodinger_maps(const std::vector<Mat>& lambda,
                                  const SystemModel& system,
                                  const TimeGrid& grid) {
  if (static_cast<int>(lambda.size()) != grid.size()) {
    throw std::invalid_argument("map series does not match the grid");
  }
  const InteractionPicture picture(system.h);
  std::vector<Mat> out(lambda.size());
  for (int k = 0; k < static_cast<int>(lambda.size()); ++k) {
    const Mat u = picture.unitary(grid.time(k));
    out[k] = Eigen::kroneckerProduct(u.conjugate(), u) * lambda[k];
  }
  return out;
}

Cplx exact_three_point(const FullModel& full, const Mat& rho_s0, const Mat& a,
                       const Mat& b, const Mat& c, double t2, double t1) {
  if (t1 < 0.0 || t2 < t1) {
    throw std::invalid_argument("correlation times out of order");
  }
  const Mat x0 = full.embed_system(c) * full.product_state(rho_s0);
  const Mat x1 = full.evolve(x0, t1);
  const Mat x2 = full.embed_system(b) * x1;
  const Mat x3 = full.evolve(x2, t2 - t1);
  return (full.embed_system(a) * x3).trace();
}

Cplx exact_two_point(const FullModel& full, const Mat& rho_s0, const Mat& a,
                     const Mat& b, double t) {
  const Mat id = Mat::Identity(rho_s0.rows(), rho_s0.cols());
  return exact_three_point(full, rho_s0, a, b, id, t, 0.0);
}

Cplx factorized_three_point(const std::vector<Mat>& maps, const Mat& rho_s0,
                            const Mat& a, const Mat& b, const Mat& c, int k2,
                            int k1) {
  if (k1 < 0 || k2 < k1 || k2 >= static_cast<int>(maps.size())) {
    throw std::invalid_argument("correlation times out of order");
  }
  const int d = static_cast<int>(rho_s0.rows());
  const Mat x1 = unvec(maps[k1] * vec(c * rho_s0), d, d);
  const Vec v2 = vec(b * x1);

  Eigen::FullPivLU<Mat> lu(maps[k1]);
  if (!lu.isInvertible()) {
    throw std::runtime_error(
        "factorized correlation: singular dynamical map at the inner time");
  }
  const Vec y = maps[k2] * lu.solve(v2);
  return (a * unvec(y, d, d)).trace();
}

Cplx factorized_two_point(const std::vector<Mat>& maps, const Mat& rho_s0,
                          const Mat& a, const Mat& b, int k) {
  if (k < 0 || k >= static_cast<int>(maps.size())) {
    throw std::invalid_argument("correlation time outside the grid");
  }
  const int d = static_cast<int>(rho_s0.rows());
  return (a * unvec(maps[k] * vec(b * rho_s0), d, d)).trace();
}

double recurrence_window(const DiscreteBath& bath) {
  return 0.5 * bath.shortest_recurrence();
}

}  // namespace tclme
