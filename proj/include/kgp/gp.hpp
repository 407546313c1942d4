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

#include <cstdint>
#include <functional>

#include "kgp/kernels.hpp"
#include "kgp/linalg.hpp"

namespace kgp {

using MeanFunction = std::function<double(PointRef)>;

/// GP(m, k). An empty mean function is the zero function.
struct GPPrior {
  Kernel kernel;
  MeanFunction mean;

  double mean_at(PointRef x) const { return mean ? mean(x) : 0.0; }
  Vector mean_at(const Points& X) const;
};

/// Posterior of GP(m, k) given y_i = f(x_i) + noise, noise ~ N(0, s2) iid.
///
///   mean(x)    = m(x) + k_xX (K_XX + s2 I)^{-1} (Y - m_X)
///   cov(x, x') = k(x, x') - k_xX (K_XX + s2 I)^{-1} k_Xx'
///
/// With no data the posterior is the prior. With s2 = 0 the conditioning
/// system must be numerically invertible, and variances are evaluated with a
/// long double factor: k_bar(x, x) can then be far below k(x, x) and the
/// subtraction would otherwise lose everything to cancellation.
class GPPosterior {
 public:
  const GPPrior& prior() const { return prior_; }
  const Points& inputs() const { return X_; }
  double noise_variance() const { return noise_variance_; }
  /// Diagonal jitter that was needed to factorize K_XX + s2 I (usually 0).
  double jitter() const { return factor_.jitter; }
  Matrix cholesky_factor() const { return factor_.lower(); }
  const Vector& residual_weights() const { return residual_weights_; }

  double mean(PointRef x) const;
  double cov(PointRef x, PointRef y) const;

  /// k_bar(x, x) as computed, may be slightly negative from roundoff.
  double variance_raw(PointRef x) const;
  /// k_bar(x, x) clamped to [0, inf). Throws NumericalError if the raw value
  /// is below -1e-10 (scaled by k(x, x)).
  double variance(PointRef x) const;

  /// w(x) = (K_XX + s2 I)^{-1} k_Xx, so that mean(x) = m(x) + w(x)^T (Y - m_X).
  Vector weights(PointRef x) const;

 private:
  friend GPPosterior condition(const GPPrior&, const Dataset&, double);
  GPPosterior(GPPrior prior, Points X, Cholesky factor, Vector residual_weights, double s2)
      : prior_(std::move(prior)),
        X_(std::move(X)),
        factor_(std::move(factor)),
        residual_weights_(std::move(residual_weights)),
        noise_variance_(s2) {}

  long double reduction(PointRef x, PointRef y) const;

  GPPrior prior_;
  Points X_;
  Cholesky factor_;
  Vector residual_weights_;
  double noise_variance_;
  ExtendedMatrix extended_lower_;  // set for noise-free posteriors only
};

/// Conditions the prior on data with iid Gaussian noise of variance
/// `noise_variance` (0 for interpolation).
GPPosterior condition(const GPPrior& prior, const Dataset& data, double noise_variance);

/// Draws `count` independent samples of (f(x_1), ..., f(x_n)), one per row:
/// m_X + L u with K_XX = L L^T (jitter on failure) and u ~ N(0, I).
/// The normals come from standard_normal_columns(n, count, seed).
Matrix sample_prior(const GPPrior& prior, const Points& X, Eigen::Index count,
                    std::uint64_t seed);

}  // namespace kgp
