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

#include "kgp/reference.hpp"

#include <cmath>
#include <limits>

#include "kgp/errors.hpp"

namespace kgp::reference {

Matrix gram(const Kernel& k, const Points& A, const Points& B) {
  Matrix K(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.rows(); ++j) K(i, j) = k(A.row(i).transpose(), B.row(j).transpose());
  }
  return K;
}

Matrix gram(const Kernel& k, const Points& A) { return reference::gram(k, A, A); }

double fill_distance(const Box& domain, const Points& X, PointRef x, double rho, double resolution) {
  const Eigen::Index d = domain.dim();
  if (!(resolution > 0.0)) throw InputError("fill_distance: resolution must be > 0");
  std::vector<long long> steps(static_cast<std::size_t>(d));
  for (Eigen::Index a = 0; a < d; ++a) {
    steps[static_cast<std::size_t>(a)] =
        static_cast<long long>(std::floor((domain.upper[a] - domain.lower[a]) / resolution + 1e-9));
  }
  // Odometer over the full box lattice.
  std::vector<long long> j(static_cast<std::size_t>(d), 0);
  Vector y(d);
  double best = -1.0;
  while (true) {
    for (Eigen::Index a = 0; a < d; ++a) {
      y[a] = domain.lower[a] + static_cast<double>(j[static_cast<std::size_t>(a)]) * resolution;
    }
    if ((y - x).squaredNorm() <= rho * rho) {
      double nearest = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        nearest = std::min(nearest, (X.row(i).transpose() - y).squaredNorm());
      }
      best = std::max(best, nearest);
    }
    Eigen::Index a = d - 1;
    while (a >= 0 && ++j[static_cast<std::size_t>(a)] > steps[static_cast<std::size_t>(a)]) {
      j[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  if (best < 0.0) throw InputError("fill_distance: no grid points within rho of x");
  return std::sqrt(best);
}

double hsic_double_sum(const Kernel& kx, const Kernel& ky, const PairedSample& sample) {
  const Eigen::Index n = sample.size();
  const double nn = static_cast<double>(n);
  double joint = 0.0, kmean = 0.0, lmean = 0.0, cross = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double ki = 0.0, li = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double k = kx(sample.X.row(i).transpose(), sample.X.row(j).transpose());
      const double l = ky(sample.Y.row(i).transpose(), sample.Y.row(j).transpose());
      joint += k * l;
      ki += k;
      li += l;
    }
    kmean += ki;
    lmean += li;
    cross += (ki / nn) * (li / nn);
  }
  return joint / (nn * nn) + (kmean / (nn * nn)) * (lmean / (nn * nn)) - 2.0 * cross / nn;
}

}  // namespace kgp::reference
