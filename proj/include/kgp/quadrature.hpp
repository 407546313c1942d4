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

#include <vector>

#include "kgp/embeddings.hpp"

namespace kgp {

/// Weights for approximating the integral of f against a target measure P by
/// sum_i w_i f(x_i).
struct QuadratureRule {
  Kernel kernel;
  Points nodes;
  DiscreteMeasure target;
  Vector weights;
  Vector target_mean_at_nodes;    // mu_X = (mu_P(x_1), ..., mu_P(x_n))
  double target_double_integral;  // int int k dP dP
  double lambda = 0.0;
};

/// w = (K_XX + n lambda I)^{-1} mu_X. At lambda = 0 the system is solved by
/// pivoted LDL^T and a singular K_XX is a NumericalError.
QuadratureRule kq_weights(const Kernel& kernel, const Points& nodes, const DiscreteMeasure& target,
                          double lambda);

struct BQPosterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// Bayesian quadrature with observation noise s2 = n lambda:
///   mean     = mu_X^T (K_XX + s2 I)^{-1} f_X
///   variance = int int k dP dP - mu_X^T (K_XX + s2 I)^{-1} mu_X
/// `lambda` must match the rule.
BQPosterior bq_posterior(const QuadratureRule& rule, const Vector& f_values, double lambda);

struct QuadratureIdentityReport {
  double variance = 0.0;  // BQ posterior variance
  double mmd2 = 0.0;      // MMD(P_n, P)^2 with P_n = sum_i w_i delta_{x_i}
  double gap = 0.0;
};

/// Posterior variance against MMD(P_n, P)^2. Requires a lambda = 0 rule.
QuadratureIdentityReport verify_bq_kq_identity(const QuadratureRule& rule);

struct Box {
  Vector lower;
  Vector upper;

  Eigen::Index dim() const { return lower.size(); }
  static Box unit(Eigen::Index d) { return Box{Vector::Zero(d), Vector::Ones(d)}; }
};

/// sup over y in box, |y - x| <= rho, of min_i |y - x_i|, by brute force over
/// the grid lower + resolution * j (per axis, upper end included). Grid
/// points are scanned in parallel.
double fill_distance(const Box& domain, const Points& X, PointRef x, double rho, double resolution);

struct ContractionGrid {
  Eigen::Index n = 0;
  double fill_distance = 0.0;
  double posterior_variance = 0.0;
};

struct ContractionReport {
  std::vector<ContractionGrid> grids;
  double fitted_slope = 0.0;       // least squares slope of log k_bar vs log h
  double theoretical_slope = 0.0;  // 2s - d = 2 alpha
};

struct ContractionConfig {
  double rho = 0.5;
  double resolution = 1e-5;
};

/// For each n, conditions a noise-free GP on the cell-centred grid
/// {(j + 1/2)/n} of the unit interval and records k_bar(x, x) together with
/// the fill distance at x. Needs a Matern kernel, d = 1 and at least three
/// grid sizes.
ContractionReport variance_contraction_experiment(const Kernel& kernel, double x,
                                                  const std::vector<Eigen::Index>& grid_sizes,
                                                  const ContractionConfig& config = {});

/// Least squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kgp
