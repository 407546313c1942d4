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

// Worst-case (RKHS) versus average-case (GP) error identities for
// pointwise prediction.

namespace kgp {

/// w(x) solving (K_XX + s2 I) w = k_Xx.
struct WeightVector {
  Points X;
  Vector query;
  Vector weights;
  double noise_variance = 0.0;
};

/// Throws NumericalError for a singular noise-free system.
WeightVector optimal_weights(const Kernel& kernel, const Points& X, PointRef x, double noise_variance);

/// |k(., x) - sum_i w_i k(., x_i)|_H, i.e. the supremum of
/// f(x) - sum_i w_i f(x_i) over the unit ball of H_k. Computed from the
/// expanded quadratic form k(x,x) - 2 w^T k_Xx + w^T K_XX w, clamped at zero;
/// a value below -1e-10 (relative) is a NumericalError.
double worst_case_error(const Kernel& kernel, const Points& X, const Vector& weights, PointRef x);

/// Unclamped square of worst_case_error.
double worst_case_error_squared_raw(const Kernel& kernel, const Points& X, const Vector& weights,
                                    PointRef x);

struct IdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

/// sqrt(k_bar(x,x)) of the noise-free posterior against the worst-case error
/// of the weights K_XX^{-1} k_Xx.
IdentityReport verify_noise_free_identity(const Kernel& kernel, const Points& X, PointRef x);
IdentityReport verify_noise_free_identity(const Kernel& kernel, const Dataset& data, PointRef x);

/// sqrt(k_bar(x,x) + s2) against the worst-case error in the RKHS of
/// k + s2 * delta with weights (K_XX + s2 I)^{-1} k_Xx. Requires x to differ
/// (bitwise) from every node; otherwise PreconditionError.
IdentityReport verify_noisy_identity(const Kernel& kernel, const Points& X, double noise_variance,
                                     PointRef x);
IdentityReport verify_noisy_identity(const Kernel& kernel, const Dataset& data,
                                     double noise_variance, PointRef x);

/// f = sum_j c_j k(., z_j).
struct RepresenterFunction {
  Points centers;
  Vector coefficients;

  double operator()(const Kernel& k, PointRef x) const;
  Vector at(const Kernel& k, const Points& X) const;
  double rkhs_norm_squared(const Kernel& k) const;
};

struct ErrorBoundReport {
  double lhs = 0.0;  // (m_bar(x) - f(x))^2
  double rhs = 0.0;  // |f|_H^2 k_bar(x,x)
  bool holds = false;
};

/// Interpolates f at X (noise-free GP posterior mean) and checks
/// (m_bar(x) - f(x))^2 <= |f|^2 k_bar(x,x) + 1e-10.
ErrorBoundReport verify_error_bound(const Kernel& kernel, const Points& X,
                                    const RepresenterFunction& f, PointRef x);

struct WeightObjectiveReport {
  double objective = 0.0;                // e(w)^2 + s2 |w|^2 at the optimum
  double min_perturbed_objective = 0.0;  // over all perturbations tried
  double gradient_norm = 0.0;            // |2 (K + s2 I) w - 2 k_Xx|
  int perturbations = 0;
  bool passed = false;
};

/// e(w)^2 + s2 |w|^2 where e is the worst-case error.
double weight_objective(const Kernel& kernel, const Points& X, double noise_variance,
                        const Vector& w, PointRef x);

/// Checks that w(x) minimises weight_objective: 100 random unit directions
/// at step sizes 1e-2 and 1e-3 never decrease the objective, and the
/// closed-form gradient vanishes (<= 1e-8).
WeightObjectiveReport verify_weight_objective(const Kernel& kernel, const Points& X,
                                              double noise_variance, PointRef x,
                                              std::uint64_t seed = 0);

}  // namespace kgp
