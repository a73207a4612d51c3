// Copyright 2026 The Authors.
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

// Stacked prediction-horizon prior of a linear position model
//
//   x_k = A x_{k-1} + B u_k + w_k,   w_k ~ N(0, Lambda),
//
// over the M + 1 stamps 0..M. The stacked state is 3(M + 1) long and stamp k
// occupies rows 3k..3k+2.

#ifndef FEATSEL_MOTION_HPP_
#define FEATSEL_MOTION_HPP_

#include <span>
#include <string>
#include <vector>

#include "featsel/errors.hpp"
#include "featsel/numerics.hpp"

namespace featsel {

template <typename Scalar>
struct MotionModel {
  Matrix3<Scalar> A = Matrix3<Scalar>::Identity();
  // 3 x m; m may be zero.
  MatrixX<Scalar> B = MatrixX<Scalar>::Zero(3, 0);
  // Process-noise covariance, constant over the horizon.
  SymmetricMatrix<Scalar> Lambda = SymmetricMatrix<Scalar>::Identity(3);
};

template <typename Scalar>
struct HorizonPrior {
  int M = 0;
  VectorX<Scalar> mu;
  SymmetricMatrix<Scalar> Sigma;
  // Sigma^{-1}; the prior information matrix.
  SymmetricMatrix<Scalar> Hbar;

  Index dim() const { return mu.size(); }
};

using MotionModeld = MotionModel<double>;
using HorizonPriord = HorizonPrior<double>;

template <typename Scalar>
HorizonPrior<Scalar> propagate_prior(const MotionModel<Scalar>& model,
                                     const Vector3<Scalar>& mu0,
                                     const SymmetricMatrix<Scalar>& sigma0,
                                     std::span<const VectorX<Scalar>> controls,
                                     int M) {
  if (M < 0) throw InvalidArgument("propagate_prior: negative horizon");
  if (controls.size() != static_cast<std::size_t>(M)) {
    throw InvalidArgument("propagate_prior: expected " + std::to_string(M) +
                          " controls, got " + std::to_string(controls.size()));
  }
  if (sigma0.dim() != 3 || model.Lambda.dim() != 3 || model.B.rows() != 3) {
    throw InvalidArgument("propagate_prior: model blocks must have 3 rows");
  }
  for (const auto& u : controls) {
    if (u.size() != model.B.cols()) {
      throw InvalidArgument("propagate_prior: control size does not match B");
    }
  }
  // Reports the failing pivot for a non-PD initial covariance.
  (void)cholesky_logdet(sigma0);

  const Index n = 3 * (M + 1);
  HorizonPrior<Scalar> prior;
  prior.M = M;
  prior.mu.resize(n);
  MatrixX<Scalar> sigma = MatrixX<Scalar>::Zero(n, n);

  std::vector<Matrix3<Scalar>> diag(M + 1);
  diag[0] = sigma0.matrix();
  prior.mu.template segment<3>(0) = mu0;
  for (int k = 1; k <= M; ++k) {
    diag[k] = model.A * diag[k - 1] * model.A.transpose() +
              model.Lambda.matrix();
    diag[k] = symmetrize(diag[k]);
    prior.mu.template segment<3>(3 * k) =
        model.A * prior.mu.template segment<3>(3 * (k - 1)) +
        model.B * controls[k - 1];
  }

  // Cov(x_j, x_i) = A^(j-i) Sigma_i for i < j: lower blocks hold the power
  // product, upper blocks its transpose.
  for (int i = 0; i <= M; ++i) {
    sigma.template block<3, 3>(3 * i, 3 * i) = diag[i];
    Matrix3<Scalar> cross = diag[i];
    for (int j = i + 1; j <= M; ++j) {
      cross = model.A * cross;
      sigma.template block<3, 3>(3 * j, 3 * i) = cross;
      sigma.template block<3, 3>(3 * i, 3 * j) = cross.transpose();
    }
  }

  prior.Sigma = SymmetricMatrix<Scalar>::Symmetrized(sigma);
  prior.Hbar = spd_inverse(prior.Sigma);
  return prior;
}

}  // namespace featsel

#endif  // FEATSEL_MOTION_HPP_
