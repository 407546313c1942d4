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

#include "kgp/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <limits>

#include "kgp/errors.hpp"

namespace kgp {

namespace {

bool factor_ok(const Eigen::LLT<Matrix>& llt) {
  if (llt.info() != Eigen::Success) return false;
  // Eigen reports success on some indefinite inputs with a zero pivot.
  const auto d = llt.matrixLLT().diagonal();
  return d.allFinite() && (d.array() > 0.0).all();
}

std::string describe(const Matrix& A, std::string_view what) {
  char buf[160];
  std::snprintf(buf, sizeof buf, " (%ldx%ld, trace %.6g)", static_cast<long>(A.rows()),
                static_cast<long>(A.cols()), A.trace());
  return std::string(what) + buf;
}

}  // namespace

Cholesky cholesky_with_jitter(const Matrix& A, std::string_view what) {
  Cholesky out;
  if (A.rows() != A.cols()) throw InputError("cholesky: " + std::string(what) + " is not square");
  if (!A.allFinite()) throw NumericalError("cholesky: " + describe(A, what) + " has non-finite entries");
  out.llt.compute(A);
  if (A.rows() == 0 || factor_ok(out.llt)) return out;

  const double n = static_cast<double>(A.rows());
  const double base = std::abs(A.trace()) / n;
  for (double rel = 1e-12; rel <= 1e-6 * (1.0 + 1e-9); rel *= 10.0) {
    const double jitter = rel * base;
    out.llt.compute(with_diagonal(A, jitter));
    if (factor_ok(out.llt)) {
      out.jitter = jitter;
      return out;
    }
  }
  throw NumericalError("cholesky failed for " + describe(A, what) +
                       " after jitter escalation up to 1e-6*trace/n");
}

Cholesky cholesky_strict(const Matrix& A, std::string_view what) {
  Cholesky out;
  if (!A.allFinite()) throw NumericalError("cholesky: " + describe(A, what) + " has non-finite entries");
  out.llt.compute(A);
  if (A.rows() > 0 && !factor_ok(out.llt)) {
    throw NumericalError("cholesky failed for " + describe(A, what) + " (not positive definite)");
  }
  return out;
}

PivotedSolver::PivotedSolver(const Matrix& A, std::string_view what) {
  if (!A.allFinite()) throw NumericalError(describe(A, what) + " has non-finite entries");
  if (A.rows() == 0) {
    rcond_ = 1.0;
    return;
  }
  ldlt_.compute(A);
  rcond_ = ldlt_.info() == Eigen::Success ? ldlt_.rcond() : 0.0;
  // The L1 estimate misses exactly zero pivots (LDL^T solves skip them), so
  // also bound it by the pivot ratio, which is never below 1 / cond(A).
  const Vector d = ldlt_.vectorD().cwiseAbs();
  if (d.maxCoeff() > 0.0) rcond_ = std::min(rcond_, d.minCoeff() / d.maxCoeff());
  else rcond_ = 0.0;
  if (!(rcond_ >= kMinReciprocalCondition)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", rcond_);
    throw NumericalError("singular system: " + describe(A, what) + " has reciprocal condition " +
                         buf + " < 1e-12");
  }
}

Vector PivotedSolver::solve(const Vector& b) const {
  if (b.size() == 0) return Vector();
  return ldlt_.solve(b);
}

Matrix psd_square_root(const Matrix& K) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(K);
  if (es.info() != Eigen::Success) throw NumericalError("psd_square_root: eigensolver failed");
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

double condition_number(const Matrix& K) {
  if (K.rows() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(K, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("condition_number: eigensolver failed");
  const double lo = es.eigenvalues()[0];
  const double hi = es.eigenvalues()[K.rows() - 1];
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

Vector extended_residual(const Matrix& A, const Vector& x, const Vector& b) {
  Vector r(b.size());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    long double s = b[i];
    for (Eigen::Index j = 0; j < A.cols(); ++j) s -= static_cast<long double>(A(i, j)) * x[j];
    r[i] = static_cast<double>(s);
  }
  return r;
}

long double extended_quadratic_form(const Vector& x, const Matrix& A, const Vector& y) {
  long double s = 0.0L;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    long double col = 0.0L;
    for (Eigen::Index i = 0; i < A.rows(); ++i) col += static_cast<long double>(x[i]) * A(i, j);
    s += col * y[j];
  }
  return s;
}

}  // namespace kgp
