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

#include "kgp/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "kgp/errors.hpp"
#include "kgp/rng.hpp"

namespace kgp {

namespace {

void check_truncation(const EigenSystem& eig, Eigen::Index r, Eigen::Index lo) {
  if (r < lo || r > eig.size()) {
    throw InputError("truncation " + std::to_string(r) + " outside [" + std::to_string(lo) + ", " +
                     std::to_string(eig.size()) + "]");
  }
}

}  // namespace

EigenSystem nystrom_eigensystem(const Kernel& kernel, const Points& nodes,
                                const std::optional<Vector>& node_weights) {
  const Eigen::Index n = nodes.rows();
  if (n == 0) throw InputError("nystrom_eigensystem: no nodes");
  Vector w = node_weights ? *node_weights : Vector::Constant(n, 1.0 / static_cast<double>(n));
  if (w.size() != n) throw InputError("nystrom_eigensystem: weights do not match nodes");
  if (!w.allFinite() || (w.array() <= 0.0).any()) {
    throw InputError("nystrom_eigensystem: node weights must be positive");
  }
  w /= w.sum();

  const Vector sqrt_w = w.cwiseSqrt();
  const Matrix K = gram(kernel, nodes);
  const Matrix S = sqrt_w.asDiagonal() * K * sqrt_w.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success) throw NumericalError("nystrom_eigensystem: eigensolver failed");

  EigenSystem out;
  out.nodes = nodes;
  out.node_weights = w;
  // Eigen returns ascending order.
  out.raw_eigenvalues = es.eigenvalues().reverse();
  const Matrix U = es.eigenvectors().rowwise().reverse();
  const double top = std::max(out.raw_eigenvalues[0], 0.0);
  if (out.raw_eigenvalues.minCoeff() < -1e-10 * std::max(top, 1.0)) {
    throw NumericalError("nystrom_eigensystem: kernel matrix has a negative eigenvalue beyond roundoff");
  }
  out.eigenvalues = out.raw_eigenvalues.cwiseMax(0.0);
  out.eigenfunctions = sqrt_w.cwiseInverse().asDiagonal() * U;
  return out;
}

double mercer_kernel_eval(const EigenSystem& eig, Eigen::Index truncation, Eigen::Index j,
                          Eigen::Index l) {
  check_truncation(eig, truncation, 1);
  if (j < 0 || l < 0 || j >= eig.size() || l >= eig.size()) {
    throw InputError("mercer_kernel_eval: node index out of range");
  }
  const auto r = truncation;
  return (eig.eigenfunctions.row(j).head(r).array() * eig.eigenvalues.head(r).transpose().array() *
          eig.eigenfunctions.row(l).head(r).array())
      .sum();
}

Matrix mercer_matrix(const EigenSystem& eig, Eigen::Index truncation) {
  check_truncation(eig, truncation, 1);
  const auto Phi = eig.eigenfunctions.leftCols(truncation);
  return Phi * eig.eigenvalues.head(truncation).asDiagonal() * Phi.transpose();
}

Vector power_ready_eigenvalues(const EigenSystem& eig) {
  Vector lam = eig.eigenvalues;
  const double cutoff = 1e-12 * lam[0];
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < cutoff) lam[i] = 0.0;
  }
  return lam;
}

Matrix power_kernel(const EigenSystem& eig, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InputError("power_kernel: theta must lie in (0, 1]");
  const Vector lam = power_ready_eigenvalues(eig).array().pow(theta);
  const Matrix& Phi = eig.eigenfunctions;
  Matrix P = Phi * lam.asDiagonal() * Phi.transpose();
  return 0.5 * (P + P.transpose());
}

double hs_inclusion_diagnostic(const EigenSystem& eig, double theta, Eigen::Index truncation) {
  if (!(theta > 0.0 && theta < 1.0)) throw InputError("hs_inclusion_diagnostic: theta must lie in (0, 1)");
  check_truncation(eig, truncation, 0);
  const Vector lam = power_ready_eigenvalues(eig);
  double s = 0.0;
  for (Eigen::Index i = 0; i < truncation; ++i) {
    if (lam[i] > 0.0) s += std::pow(lam[i], 1.0 - theta);
  }
  return s;
}

Matrix kl_sample(const EigenSystem& eig, Eigen::Index truncation, Eigen::Index count,
                 std::uint64_t seed) {
  check_truncation(eig, truncation, 1);
  if (count < 0) throw InputError("kl_sample: count must be >= 0");
  const Eigen::Index n = eig.size();
  const Matrix basis = eig.eigenfunctions.leftCols(truncation) *
                       eig.eigenvalues.head(truncation).cwiseSqrt().asDiagonal();
  // All n normals are drawn even when r < n, so z is shared across truncations.
  const Matrix Z = standard_normal_columns(n, count, seed);
  Matrix out = (basis * Z.topRows(truncation)).transpose();
  return out;
}

}  // namespace kgp
