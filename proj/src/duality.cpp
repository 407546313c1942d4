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

#include "kgp/duality.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

#include "kgp/errors.hpp"
#include "kgp/gp.hpp"
#include "kgp/linalg.hpp"
#include "kgp/rng.hpp"

namespace kgp {

namespace {

bool same_point(PointRef a, PointRef b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

Dataset zero_outputs(const Points& X) { return Dataset{X, Vector::Zero(X.rows())}; }

}  // namespace

WeightVector optimal_weights(const Kernel& kernel, const Points& X, PointRef x, double noise_variance) {
  if (!std::isfinite(noise_variance) || noise_variance < 0.0) {
    throw InputError("optimal_weights: noise variance must be >= 0");
  }
  WeightVector out{X, x, Vector(), noise_variance};
  if (X.rows() == 0) return out;
  const Vector k = gram_column(kernel, X, x);
  const Matrix A = with_diagonal(gram(kernel, X), noise_variance);
  if (noise_variance > 0.0) {
    out.weights = refine(A, cholesky_strict(A, "K_XX + s2 I"), k);
  } else {
    out.weights = refine(A, PivotedSolver(A, "K_XX"), k);
  }
  return out;
}

double worst_case_error_squared_raw(const Kernel& kernel, const Points& X, const Vector& weights,
                                    PointRef x) {
  if (weights.size() != X.rows()) throw InputError("worst_case_error: weights do not match nodes");
  const double kxx = kernel(x, x);
  if (X.rows() == 0) return kxx;
  const Vector k = gram_column(kernel, X, x);
  const Matrix K = gram(kernel, X);
  // Accumulated in long double: the three terms are O(k(x,x)) and cancel.
  long double cross = 0.0L;
  for (Eigen::Index i = 0; i < k.size(); ++i) cross += static_cast<long double>(weights[i]) * k[i];
  const long double q = kxx - 2.0L * cross + extended_quadratic_form(weights, K, weights);
  return static_cast<double>(q);
}

double worst_case_error(const Kernel& kernel, const Points& X, const Vector& weights, PointRef x) {
  const double q = worst_case_error_squared_raw(kernel, X, weights, x);
  if (q >= 0.0) return std::sqrt(q);
  const double scale = std::max(1.0, std::abs(kernel(x, x)));
  if (q < -1e-10 * scale) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", q);
    throw NumericalError(std::string("worst_case_error: quadratic form is negative beyond roundoff: ") + buf);
  }
  return 0.0;
}

IdentityReport verify_noise_free_identity(const Kernel& kernel, const Points& X, PointRef x) {
  const GPPosterior post = condition(GPPrior{kernel, {}}, zero_outputs(X), 0.0);
  const WeightVector w = optimal_weights(kernel, X, x, 0.0);
  IdentityReport r;
  r.lhs = std::sqrt(post.variance(x));
  r.rhs = worst_case_error(kernel, X, w.weights, x);
  r.gap = std::abs(r.lhs - r.rhs);
  return r;
}

IdentityReport verify_noise_free_identity(const Kernel& kernel, const Dataset& data, PointRef x) {
  return verify_noise_free_identity(kernel, data.X, x);
}

IdentityReport verify_noisy_identity(const Kernel& kernel, const Points& X, double noise_variance,
                                     PointRef x) {
  if (!std::isfinite(noise_variance) || !(noise_variance > 0.0)) {
    throw InputError("verify_noisy_identity: noise variance must be > 0");
  }
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (same_point(X.row(i).transpose(), x)) {
      throw PreconditionError(
          "verify_noisy_identity: the query point coincides with training node " + std::to_string(i) +
          "; the identity sqrt(k_bar(x,x) + s2) = |k^s(.,x) - sum w_i k^s(.,x_i)| requires x != x_i");
    }
  }
  const GPPosterior post = condition(GPPrior{kernel, {}}, zero_outputs(X), noise_variance);
  const WeightVector w = optimal_weights(kernel, X, x, noise_variance);
  const Kernel noisy = Kernel::sum(kernel, Kernel::kronecker_delta(noise_variance));
  IdentityReport r;
  r.lhs = std::sqrt(post.variance(x) + noise_variance);
  r.rhs = worst_case_error(noisy, X, w.weights, x);
  r.gap = std::abs(r.lhs - r.rhs);
  return r;
}

IdentityReport verify_noisy_identity(const Kernel& kernel, const Dataset& data,
                                     double noise_variance, PointRef x) {
  return verify_noisy_identity(kernel, data.X, noise_variance, x);
}

double RepresenterFunction::operator()(const Kernel& k, PointRef x) const {
  if (centers.rows() == 0) return 0.0;
  return gram_column(k, centers, x).dot(coefficients);
}

Vector RepresenterFunction::at(const Kernel& k, const Points& X) const {
  if (centers.rows() == 0) return Vector::Zero(X.rows());
  return gram(k, X, centers) * coefficients;
}

double RepresenterFunction::rkhs_norm_squared(const Kernel& k) const {
  if (centers.rows() == 0) return 0.0;
  return std::max(0.0, coefficients.dot(gram(k, centers) * coefficients));
}

ErrorBoundReport verify_error_bound(const Kernel& kernel, const Points& X,
                                    const RepresenterFunction& f, PointRef x) {
  if (f.coefficients.size() != f.centers.rows()) {
    throw InputError("verify_error_bound: coefficients do not match centres");
  }
  const Dataset data{X, f.at(kernel, X)};
  const GPPosterior post = condition(GPPrior{kernel, {}}, data, 0.0);
  ErrorBoundReport r;
  const double e = post.mean(x) - f(kernel, x);
  r.lhs = e * e;
  r.rhs = f.rkhs_norm_squared(kernel) * post.variance(x);
  r.holds = r.lhs <= r.rhs + 1e-10;
  return r;
}

double weight_objective(const Kernel& kernel, const Points& X, double noise_variance,
                        const Vector& w, PointRef x) {
  return worst_case_error_squared_raw(kernel, X, w, x) + noise_variance * w.squaredNorm();
}

WeightObjectiveReport verify_weight_objective(const Kernel& kernel, const Points& X,
                                              double noise_variance, PointRef x,
                                              std::uint64_t seed) {
  if (!std::isfinite(noise_variance) || !(noise_variance > 0.0)) {
    throw InputError("verify_weight_objective: noise variance must be > 0");
  }
  WeightObjectiveReport r;
  const Vector w = optimal_weights(kernel, X, x, noise_variance).weights;
  r.objective = weight_objective(kernel, X, noise_variance, w, x);
  r.min_perturbed_objective = r.objective;
  if (X.rows() > 0) {
    const Matrix A = with_diagonal(gram(kernel, X), noise_variance);
    r.gradient_norm = (2.0 * (A * w) - 2.0 * gram_column(kernel, X, x)).norm();
  }

  bool never_lower = true;
  Rng rng = make_rng(seed, 0);
  for (int i = 0; i < 100 && X.rows() > 0; ++i) {
    Vector u = standard_normal(rng, X.rows());
    u /= u.norm();
    for (double eps : {1e-2, 1e-3}) {
      const double v = weight_objective(kernel, X, noise_variance, w + eps * u, x);
      r.min_perturbed_objective = std::min(r.min_perturbed_objective, v);
      never_lower = never_lower && v >= r.objective;
      ++r.perturbations;
    }
  }
  r.passed = never_lower && r.gradient_norm <= 1e-8;
  return r;
}

}  // namespace kgp
