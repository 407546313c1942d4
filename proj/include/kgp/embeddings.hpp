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

#include "kgp/kernels.hpp"

namespace kgp {

/// sum_i w_i delta_{a_i}; weights may be negative.
struct DiscreteMeasure {
  Points atoms;
  Vector weights;

  static DiscreteMeasure uniform(Points atoms);
  static DiscreteMeasure point_mass(PointRef x);

  Eigen::Index size() const { return atoms.rows(); }
  Eigen::Index dim() const { return atoms.cols(); }
  /// Nonnegative weights summing to 1 within 1e-10.
  bool is_probability() const;
};

void validate(const DiscreteMeasure& m);

/// mu(x) = sum_i w_i k(x, a_i).
class KernelMean {
 public:
  KernelMean(Kernel kernel, DiscreteMeasure measure);

  const Kernel& kernel() const { return kernel_; }
  const DiscreteMeasure& measure() const { return measure_; }

  double operator()(PointRef x) const;
  Vector at(const Points& X) const;

  /// <mu, other>_H = sum_ij w_i v_j k(a_i, b_j).
  double inner(const KernelMean& other) const;

 private:
  Kernel kernel_;
  DiscreteMeasure measure_;
};

KernelMean mean_embed(const Kernel& kernel, const DiscreteMeasure& measure);

/// Atoms of P and Q with bitwise-equal atoms merged (ordered by their bit
/// patterns), and the signed weight difference c (P minus Q) on them.
/// signed_difference(Q, P) has exactly the negated coefficients.
struct SignedMeasure {
  Points atoms;
  Vector coefficients;
};
SignedMeasure signed_difference(const DiscreteMeasure& P, const DiscreteMeasure& Q);

/// |mu_P - mu_Q|_H = sqrt(c^T K_ZZ c). NumericalError if the quadratic form
/// is below -1e-10 (relative).
double mmd(const Kernel& kernel, const DiscreteMeasure& P, const DiscreteMeasure& Q);

struct AverageCaseReport {
  double mmd2 = 0.0;         // |mu_P|^2 - 2 <mu_P, mu_Q> + |mu_Q|^2
  double gp_variance = 0.0;  // Var(Pf - Qf) = c^T K_ZZ c for f ~ GP(0, k)
  double gap = 0.0;
  double mc_estimate = 0.0;  // mean of (Pf - Qf)^2 over prior draws
  double mc_se = 0.0;
  Eigen::Index draws = 0;
};

/// Worst case (MMD^2) against the GP average case E_f (Pf - Qf)^2, both
/// exactly and by Monte Carlo over `draws` prior samples.
AverageCaseReport verify_average_case(const Kernel& kernel, const DiscreteMeasure& P,
                                      const DiscreteMeasure& Q, Eigen::Index draws = 10000,
                                      std::uint64_t seed = 0);

/// Uniform-weight empirical kernel mean of a sample.
KernelMean empirical_mean(const Kernel& kernel, const Points& sample);

/// Shrinkage estimator sum_i w_i k(., x_i) with
/// w = (K_XX + n lambda I)^{-1} mu_hat_X, mu_hat_X = K_XX 1/n.
KernelMean skme(const Kernel& kernel, const Points& sample, double lambda);

/// |sum_i w_i k(., x_i) - mu_hat|^2 + n lambda |w|^2; minimised by the skme weights.
double skme_objective(const Kernel& kernel, const Points& sample, double lambda, const Vector& w);

struct PosteriorMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// GP(0, k^theta) prior on the kernel mean with observations
/// mu_hat(x_i) = mu(x_i) + N(0, s2):
///   mean     = k^theta_xX (K^theta + s2 I)^{-1} mu_hat_X
///   variance = k^theta(x,x) - k^theta_xX (K^theta + s2 I)^{-1} k^theta_Xx
PosteriorMoments bayes_kmean_posterior(const Matrix& power_gram, const Vector& empirical_mean_at_x,
                                       double noise_variance, const Vector& query_row,
                                       double query_diagonal);

/// Posterior means at every sample atom (query rows are the rows of the
/// power Gram matrix itself).
Vector bayes_kmean_posterior_at_atoms(const Matrix& power_gram, const Vector& empirical_mean_at_x,
                                      double noise_variance);

}  // namespace kgp
