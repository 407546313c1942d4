/*
 * Copyright 2026 The kgp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <optional>

#include "kgp/kernels.hpp"

namespace kgp {

/// f(x) = sum_i coefficients_i k(x, x_i), optionally clipped to [-M, M] on
/// prediction.
class KRREstimator {
 public:
  KRREstimator(Kernel kernel, Points X, Vector coefficients, double regularization)
      : kernel_(std::move(kernel)),
        X_(std::move(X)),
        coefficients_(std::move(coefficients)),
        regularization_(regularization) {}

  const Kernel& kernel() const { return kernel_; }
  const Points& inputs() const { return X_; }
  const Vector& coefficients() const { return coefficients_; }
  double regularization() const { return regularization_; }
  std::optional<double> clip_bound() const { return clip_; }

  /// Copy that clips predictions to [-M, M]; the coefficients are unchanged.
  KRREstimator clipped(double M) const;

  /// Unclipped value sum_i alpha_i k(x, x_i).
  double predict_raw(PointRef x) const;
  /// predict_raw clipped to [-M, M] when a clip bound is set.
  double predict(PointRef x) const;
  /// predict at every row of Q.
  Vector predict_at(const Points& Q) const;

 private:
  Kernel kernel_;
  Points X_;
  Vector coefficients_;
  double regularization_;
  std::optional<double> clip_;
};

/// Minimiser of (1/n) sum (y_i - f(x_i))^2 + lambda |f|_H^2:
/// alpha = (K_XX + n lambda I)^{-1} Y. Duplicate inputs are fine.
KRREstimator fit_krr(const Kernel& kernel, const Dataset& data, double lambda);

/// Minimum-norm interpolant alpha = K_XX^{-1} Y. Throws NumericalError when
/// K_XX is singular (reciprocal condition below 1e-12).
KRREstimator fit_interpolant(const Kernel& kernel, const Dataset& data);

/// |f|_H = sqrt(alpha^T K_XX alpha).
double rkhs_norm(const KRREstimator& estimator);

/// (1/n) sum (y_i - f(x_i))^2 + lambda alpha^T K alpha for f = sum alpha_i k(., x_i).
double krr_objective(const Kernel& kernel, const Dataset& data, double lambda, const Vector& alpha);

}  // namespace kgp
