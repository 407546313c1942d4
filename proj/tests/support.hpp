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

#include <initializer_list>

#include "kgp/kernels.hpp"
#include "kgp/rng.hpp"

namespace kgp::test {

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

/// Points from a list of rows.
inline Points pts(std::initializer_list<std::initializer_list<double>> rows) {
  Points P(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) P.row(i++) = vec(r).transpose();
  return P;
}

inline Points random_points(std::uint64_t seed, Eigen::Index n, Eigen::Index d) {
  Rng rng = make_rng(seed, 0);
  return uniform_points(rng, n, d, 0.0, 1.0);
}

inline Vector random_normal(std::uint64_t seed, Eigen::Index n) {
  Rng rng = make_rng(seed, 1);
  return standard_normal(rng, n);
}

/// One instance of every family (composites included), all well defined on R^d.
inline std::vector<Kernel> family_zoo() {
  return {Kernel::square_exponential(0.7),
          Kernel::matern(0.5, 0.8),
          Kernel::matern(1.5, 0.6),
          Kernel::matern(2.5, 0.5),
          Kernel::polynomial(2, 1.0),
          Kernel::kronecker_delta(0.5),
          Kernel::brownian_distance(),
          Kernel::sum(Kernel::square_exponential(1.0), Kernel::kronecker_delta(0.1)),
          Kernel::product(Kernel::matern(1.5, 1.0), Kernel::polynomial(1, 1.0)),
          Kernel::scaled(Kernel::matern(0.5, 0.3), 2.5)};
}

/// Families whose Gram matrix on distinct points is strictly positive definite.
inline std::vector<Kernel> strictly_pd_zoo() {
  return {Kernel::square_exponential(0.7), Kernel::matern(0.5, 0.8), Kernel::matern(1.5, 0.6),
          Kernel::matern(2.5, 0.5),
          Kernel::sum(Kernel::square_exponential(1.0), Kernel::matern(0.5, 1.0))};
}

}  // namespace kgp::test
