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

#include <Eigen/Cholesky>

#include <string>
#include <string_view>

#include "kgp/types.hpp"

namespace kgp {

/// Smallest reciprocal condition number accepted for interpolation systems.
inline constexpr double kMinReciprocalCondition = 1e-12;

/// Cholesky factor of an SPD matrix plus the diagonal jitter that was
/// needed to obtain it.
struct Cholesky {
  Eigen::LLT<Matrix> llt;
  double jitter = 0.0;

  Matrix lower() const { return llt.matrixL(); }
  Vector solve(const Vector& b) const { return llt.solve(b); }
  /// L^{-1} b.
  Vector half_solve(const Vector& b) const { return llt.matrixL().solve(b); }
};

/// Factorizes A. If plain Cholesky fails, adds jitter 1e-12 * trace(A)/n to
/// the diagonal and escalates by 10x up to 1e-6 * trace(A)/n before giving up
/// with a NumericalError that names `what`.
Cholesky cholesky_with_jitter(const Matrix& A, std::string_view what);

/// Cholesky without jitter. For matrices that are SPD by construction
/// (K + s I with s > 0).
Cholesky cholesky_strict(const Matrix& A, std::string_view what);

/// Solves A x = b for symmetric A with a pivoted LDL^T factorization.
/// Throws NumericalError if the reciprocal condition estimate falls below
/// kMinReciprocalCondition.
class PivotedSolver {
 public:
  PivotedSolver(const Matrix& A, std::string_view what);
  Vector solve(const Vector& b) const;
  double rcond() const { return rcond_; }

 private:
  Eigen::LDLT<Matrix> ldlt_;
  double rcond_ = 0.0;
};

using ExtendedMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using ExtendedVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

/// b - A x accumulated in long double.
Vector extended_residual(const Matrix& A, const Vector& x, const Vector& b);

/// Two steps of iterative refinement with residuals in extended precision.
template <class Factor>
Vector refine(const Matrix& A, const Factor& f, const Vector& b) {
  Vector x = f.solve(b);
  for (int step = 0; step < 2; ++step) x += f.solve(extended_residual(A, x, b));
  return x;
}

/// x^T A y accumulated in long double.
long double extended_quadratic_form(const Vector& x, const Matrix& A, const Vector& y);

/// B with B B^T = K for a symmetric PSD K, from its eigendecomposition;
/// negative (roundoff) eigenvalues are dropped. Exact for singular K, unlike
/// a jittered Cholesky factor.
Matrix psd_square_root(const Matrix& K);

/// lambda_max / lambda_min of a symmetric matrix (infinity if lambda_min <= 0).
double condition_number(const Matrix& K);

inline Matrix with_diagonal(const Matrix& K, double s) {
  Matrix A = K;
  A.diagonal().array() += s;
  return A;
}

}  // namespace kgp
