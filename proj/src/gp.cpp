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

#include "kgp/gp.hpp"

#include <cmath>
#include <cstdio>

#include "kgp/errors.hpp"
#include "kgp/rng.hpp"

namespace kgp {

Vector GPPrior::mean_at(const Points& X) const {
  Vector m = Vector::Zero(X.rows());
  if (!mean) return m;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    m[i] = mean(X.row(i).transpose());
    if (!std::isfinite(m[i])) throw InputError("GP prior: mean function is not finite at a query point");
  }
  return m;
}

GPPosterior condition(const GPPrior& prior, const Dataset& data, double noise_variance) {
  if (!std::isfinite(noise_variance) || noise_variance < 0.0) {
    throw InputError("condition: noise variance must be finite and >= 0");
  }
  if (data.size() == 0) {
    return GPPosterior(prior, Points(0, data.X.cols()), Cholesky{}, Vector(), noise_variance);
  }
  validate(data);
  if (!data.has_outputs()) throw InputError("condition: dataset has no outputs");

  const Matrix K = gram(prior.kernel, data.X);
  const Matrix A = with_diagonal(K, noise_variance);
  Cholesky factor = cholesky_with_jitter(A, noise_variance > 0 ? "K_XX + s2 I" : "K_XX");
  if (noise_variance == 0.0) {
    const double rc = factor.llt.rcond();
    if (!(rc >= kMinReciprocalCondition)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g", rc);
      throw NumericalError(std::string("condition: noise-free system K_XX is singular (reciprocal condition ") +
                           buf + " < 1e-12)");
    }
  }
  const Vector residual = *data.Y - prior.mean_at(data.X);
  const Matrix Aj = with_diagonal(A, factor.jitter);
  Vector alpha = refine(Aj, factor, residual);
  GPPosterior post(prior, data.X, std::move(factor), std::move(alpha), noise_variance);
  if (noise_variance == 0.0) {
    Eigen::LLT<ExtendedMatrix> ext(Aj.cast<long double>());
    if (ext.info() == Eigen::Success) post.extended_lower_ = ext.matrixL();
  }
  return post;
}

double GPPosterior::mean(PointRef x) const {
  const double m = prior_.mean_at(x);
  if (X_.rows() == 0) return m;
  return m + gram_column(prior_.kernel, X_, x).dot(residual_weights_);
}

// k_xX (K_XX + s2 I)^{-1} k_Xy.
long double GPPosterior::reduction(PointRef x, PointRef y) const {
  const Vector kx = gram_column(prior_.kernel, X_, x);
  const Vector ky = gram_column(prior_.kernel, X_, y);
  if (extended_lower_.size() > 0) {
    const auto L = extended_lower_.triangularView<Eigen::Lower>();
    const ExtendedVector a = L.solve(kx.cast<long double>());
    const ExtendedVector b = L.solve(ky.cast<long double>());
    return a.dot(b);
  }
  return factor_.half_solve(kx).dot(factor_.half_solve(ky));
}

double GPPosterior::cov(PointRef x, PointRef y) const {
  const double k = prior_.kernel(x, y);
  if (X_.rows() == 0) return k;
  return static_cast<double>(static_cast<long double>(k) - reduction(x, y));
}

double GPPosterior::variance_raw(PointRef x) const {
  const double k = prior_.kernel(x, x);
  if (X_.rows() == 0) return k;
  return static_cast<double>(static_cast<long double>(k) - reduction(x, x));
}

double GPPosterior::variance(PointRef x) const {
  const double raw = variance_raw(x);
  if (raw >= 0.0) return raw;
  const double scale = std::max(1.0, std::abs(prior_.kernel(x, x)));
  if (raw < -1e-10 * scale) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", raw);
    throw NumericalError(std::string("posterior variance is negative beyond roundoff: ") + buf);
  }
  return 0.0;
}

Vector GPPosterior::weights(PointRef x) const {
  if (X_.rows() == 0) return Vector();
  return factor_.solve(gram_column(prior_.kernel, X_, x));
}

Matrix sample_prior(const GPPrior& prior, const Points& X, Eigen::Index count, std::uint64_t seed) {
  if (count < 0) throw InputError("sample_prior: count must be >= 0");
  const Eigen::Index n = X.rows();
  Matrix out(count, n);
  if (count == 0 || n == 0) return out;
  const Cholesky factor = cholesky_with_jitter(gram(prior.kernel, X), "K_XX (prior sampling)");
  const Matrix L = factor.lower();
  const Vector m = prior.mean_at(X);
  const Matrix U = standard_normal_columns(n, count, seed);
  out = (L.triangularView<Eigen::Lower>() * U).transpose();
  out.rowwise() += m.transpose();
  return out;
}

}  // namespace kgp
