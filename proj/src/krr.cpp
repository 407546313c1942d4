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

#include "kgp/krr.hpp"

#include <algorithm>
#include <cmath>

#include "kgp/errors.hpp"
#include "kgp/linalg.hpp"

namespace kgp {

namespace {

void check_training_data(const Dataset& data, const char* who) {
  validate(data);
  if (!data.has_outputs()) throw InputError(std::string(who) + ": dataset has no outputs");
  if (data.size() < 1) throw InputError(std::string(who) + ": need at least one observation");
}

}  // namespace

KRREstimator KRREstimator::clipped(double M) const {
  if (!std::isfinite(M) || !(M > 0.0)) throw InputError("clip bound must be finite and > 0");
  KRREstimator out = *this;
  out.clip_ = M;
  return out;
}

double KRREstimator::predict_raw(PointRef x) const {
  return gram_column(kernel_, X_, x).dot(coefficients_);
}

double KRREstimator::predict(PointRef x) const {
  const double v = predict_raw(x);
  return clip_ ? std::clamp(v, -*clip_, *clip_) : v;
}

Vector KRREstimator::predict_at(const Points& Q) const {
  Vector out = gram(kernel_, Q, X_) * coefficients_;
  if (clip_) out = out.cwiseMax(-*clip_).cwiseMin(*clip_);
  return out;
}

KRREstimator fit_krr(const Kernel& kernel, const Dataset& data, double lambda) {
  if (!std::isfinite(lambda) || !(lambda > 0.0)) throw InputError("fit_krr: lambda must be > 0");
  check_training_data(data, "fit_krr");
  const double n = static_cast<double>(data.size());
  const Matrix A = with_diagonal(gram(kernel, data.X), n * lambda);
  const Cholesky f = cholesky_strict(A, "K_XX + n lambda I");
  return KRREstimator(kernel, data.X, refine(A, f, *data.Y), lambda);
}

KRREstimator fit_interpolant(const Kernel& kernel, const Dataset& data) {
  check_training_data(data, "fit_interpolant");
  const Matrix K = gram(kernel, data.X);
  const PivotedSolver solver(K, "K_XX");
  return KRREstimator(kernel, data.X, refine(K, solver, *data.Y), 0.0);
}

double rkhs_norm(const KRREstimator& estimator) {
  const Vector& a = estimator.coefficients();
  if (a.size() == 0) return 0.0;
  const double q = a.dot(gram(estimator.kernel(), estimator.inputs()) * a);
  return std::sqrt(std::max(q, 0.0));
}

double krr_objective(const Kernel& kernel, const Dataset& data, double lambda, const Vector& alpha) {
  check_training_data(data, "krr_objective");
  const Matrix K = gram(kernel, data.X);
  const Vector fitted = K * alpha;
  const double n = static_cast<double>(data.size());
  return (*data.Y - fitted).squaredNorm() / n + lambda * alpha.dot(fitted);
}

}  // namespace kgp
