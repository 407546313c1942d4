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

#include "kgp/rng.hpp"

namespace kgp {

Matrix standard_normal_columns(Eigen::Index rows, Eigen::Index count, std::uint64_t seed) {
  Matrix Z(rows, count);
  const Eigen::Index blocks = (count + kDrawsPerStream - 1) / kDrawsPerStream;
#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(b));
    std::normal_distribution<double> normal(0.0, 1.0);
    const Eigen::Index end = std::min(count, (b + 1) * kDrawsPerStream);
    for (Eigen::Index c = b * kDrawsPerStream; c < end; ++c)
      for (Eigen::Index i = 0; i < rows; ++i) Z(i, c) = normal(rng);
  }
  return Z;
}

}  // namespace kgp
