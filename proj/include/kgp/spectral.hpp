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
#include <optional>

#include "kgp/kernels.hpp"

// Finite (Nystrom) Mercer machinery: the integral operator of k with
// respect to an empirical measure nu = sum_l w_l delta_{x_l}.

namespace kgp {

/// Eigenpairs of (T_k f)(x) = sum_l w_l k(x, x_l) f(x_l) on the nodes.
///
/// Column i of `eigenfunctions` holds phi_i at the nodes. The phi_i are
/// orthonormal in L2(nu), and sum_i lambda_i phi_i(x_j) phi_i(x_l) = k(x_j, x_l).
struct EigenSystem {
  Points nodes;
  Vector node_weights;    // positive, sum to 1
  Vector eigenvalues;     // descending, negatives clamped to 0
  Matrix eigenfunctions;  // n x n
  Vector raw_eigenvalues; // before clamping, for diagnostics

  Eigen::Index size() const { return eigenvalues.size(); }
};

/// Solves W^{1/2} K W^{1/2} = U Lambda U^T and sets Phi = W^{-1/2} U.
/// Weights default to 1/n and are normalised to sum to 1. Eigenvalues below
/// -1e-10 * lambda_1 are a NumericalError; smaller negatives clamp to 0.
EigenSystem nystrom_eigensystem(const Kernel& kernel, const Points& nodes,
                                const std::optional<Vector>& node_weights = std::nullopt);

/// sum_{i <= r} lambda_i phi_i(x_j) phi_i(x_l).
double mercer_kernel_eval(const EigenSystem& eig, Eigen::Index truncation, Eigen::Index j,
                          Eigen::Index l);

/// The whole truncated matrix.
Matrix mercer_matrix(const EigenSystem& eig, Eigen::Index truncation);

/// Eigenvalues used for fractional powers: clamped to 0 below 1e-12 * lambda_1.
Vector power_ready_eigenvalues(const EigenSystem& eig);

/// k^theta on the nodes: sum_i lambda_i^theta phi_i phi_i^T, theta in (0, 1].
Matrix power_kernel(const EigenSystem& eig, double theta);

/// sum_{i <= r} lambda_i^(1 - theta), theta in (0, 1).
double hs_inclusion_diagnostic(const EigenSystem& eig, double theta, Eigen::Index truncation);

/// Truncated Karhunen-Loeve draws, one per row:
/// sum_{i <= r} z_i sqrt(lambda_i) phi_i(nodes), z ~ N(0, I).
/// z is column i of standard_normal_columns(n, count, seed) whatever r is, so
/// two calls with the same seed share z across truncations.
Matrix kl_sample(const EigenSystem& eig, Eigen::Index truncation, Eigen::Index count,
                 std::uint64_t seed);

}  // namespace kgp
