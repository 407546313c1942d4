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

#include "kgp/dependence.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <vector>

#include "kgp/errors.hpp"
#include "kgp/linalg.hpp"
#include "kgp/rng.hpp"

namespace kgp {

namespace {

// H K H. Means are accumulated in long double, which makes the result
// exactly zero for a constant K.
Matrix double_centre(const Matrix& K) {
  const Eigen::Index n = K.rows();
  const ExtendedMatrix E = K.cast<long double>();
  const ExtendedVector rows = E.rowwise().sum() / static_cast<long double>(n);
  const ExtendedVector cols = E.colwise().sum().transpose() / static_cast<long double>(n);
  const long double all = rows.sum() / static_cast<long double>(n);
  Matrix C(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) C(i, j) = static_cast<double>(E(i, j) - rows[i] - cols[j] + all);
  return C;
}

// Distinct rows (bitwise) and, for each original row, the index of its distinct row.
struct Distinct {
  Points points;
  std::vector<Eigen::Index> of_row;
  Vector share;  // multiplicity / n
};

Distinct distinct_rows(const Points& P) {
  std::map<std::vector<std::uint64_t>, Eigen::Index> seen;
  Distinct out;
  out.of_row.resize(static_cast<std::size_t>(P.rows()));
  std::vector<Eigen::Index> first;
  std::vector<double> counts;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    std::vector<std::uint64_t> key(static_cast<std::size_t>(P.cols()));
    for (Eigen::Index a = 0; a < P.cols(); ++a) key[static_cast<std::size_t>(a)] = std::bit_cast<std::uint64_t>(P(i, a));
    auto [it, fresh] = seen.try_emplace(std::move(key), static_cast<Eigen::Index>(first.size()));
    if (fresh) {
      first.push_back(i);
      counts.push_back(0.0);
    }
    counts[static_cast<std::size_t>(it->second)] += 1.0;
    out.of_row[static_cast<std::size_t>(i)] = it->second;
  }
  const auto m = static_cast<Eigen::Index>(first.size());
  out.points.resize(m, P.cols());
  out.share.resize(m);
  for (Eigen::Index u = 0; u < m; ++u) {
    out.points.row(u) = P.row(first[static_cast<std::size_t>(u)]);
    out.share[u] = counts[static_cast<std::size_t>(u)] / static_cast<double>(P.rows());
  }
  return out;
}

}  // namespace

void validate(const PairedSample& s) {
  if (s.X.rows() != s.Y.rows()) {
    throw InputError("paired sample: X has " + std::to_string(s.X.rows()) + " rows but Y has " +
                     std::to_string(s.Y.rows()));
  }
  if (!s.X.allFinite() || !s.Y.allFinite()) throw InputError("paired sample: non-finite entries");
  if (s.size() < 2) throw InputError("paired sample: need n >= 2");
}

double hsic_empirical(const Kernel& kx, const Kernel& ky, const PairedSample& sample) {
  validate(sample);
  const double n = static_cast<double>(sample.size());
  const Matrix K = gram(kx, sample.X);
  const Matrix L = gram(ky, sample.Y);
  return (double_centre(K) * double_centre(L)).trace() / (n * n);
}

double hsic_gp_exact(const Kernel& kx, const Kernel& ky, const PairedSample& sample) {
  validate(sample);
  const double n = static_cast<double>(sample.size());
  const Matrix K = gram(kx, sample.X);
  const Matrix L = gram(ky, sample.Y);
  return double_centre(K).cwiseProduct(L).sum() / (n * n);
}

MonteCarloEstimate hsic_gp_monte_carlo(const Kernel& kx, const Kernel& ky, const PairedSample& sample,
                                       Eigen::Index draws, std::uint64_t seed) {
  validate(sample);
  if (draws < 2) throw InputError("hsic_gp_monte_carlo: need at least 2 draws");
  const Eigen::Index n = sample.size();
  const Distinct ux = distinct_rows(sample.X);
  const Distinct uy = distinct_rows(sample.Y);
  const Matrix BK = psd_square_root(gram(kx, ux.points));
  const Matrix BL = psd_square_root(gram(ky, uy.points));

  const Matrix Z = standard_normal_columns(BK.cols() + BL.cols(), draws, seed);
  Matrix F = BK * Z.topRows(BK.cols());
  Matrix G = BL * Z.bottomRows(BL.cols());
  // Both sides are centred (H is idempotent), so a constant column on either
  // side is exactly zero: a single distinct row has share exactly 1.
  F.rowwise() -= (ux.share.transpose() * F);
  G.rowwise() -= (uy.share.transpose() * G);

  // Pair counts c_uv = #{i : x_i ~ u, y_i ~ v}, so that
  // (1/n) sum_i (f_i - fbar)(g_i - gbar) = (1/n) sum_uv c_uv F_u G_v.
  Matrix C = Matrix::Zero(F.rows(), G.rows());
  for (Eigen::Index i = 0; i < n; ++i) {
    C(ux.of_row[static_cast<std::size_t>(i)], uy.of_row[static_cast<std::size_t>(i)]) += 1.0;
  }
  const Vector cov = (F.cwiseProduct(C * G)).colwise().sum().transpose() / static_cast<double>(n);
  const Vector sq = cov.array().square();

  MonteCarloEstimate out;
  out.draws = draws;
  out.estimate = sq.mean();
  const double var = (sq.array() - out.estimate).square().sum() / static_cast<double>(draws - 1);
  out.standard_error = std::sqrt(var / static_cast<double>(draws));
  return out;
}

double brownian_dcov(const PairedSample& sample) {
  const Kernel b = Kernel::brownian_distance();
  return hsic_empirical(b, b, sample);
}

double distance_covariance_v(const PairedSample& sample) {
  validate(sample);
  const Eigen::Index n = sample.size();
  Matrix A(n, n), B(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      A(i, j) = (sample.X.row(i) - sample.X.row(j)).norm();
      B(i, j) = (sample.Y.row(i) - sample.Y.row(j)).norm();
    }
  }
  const double nn = static_cast<double>(n);
  return double_centre(A).cwiseProduct(double_centre(B)).sum() / (nn * nn);
}

}  // namespace kgp
