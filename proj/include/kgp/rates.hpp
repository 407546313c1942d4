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
#include <string>
#include <vector>

#include "kgp/kernels.hpp"

namespace kgp {

struct RateExperimentResult {
  std::vector<Eigen::Index> sample_sizes;
  std::vector<double> errors;  // mean squared L2 error per size
  double fitted_slope = 0.0;
  double theoretical_slope = 0.0;
};

struct RateConfig {
  Kernel kernel = Kernel::matern(1.5, 0.2);
  /// Target function id; "representer5" is sum_j c_j k(., z_j) with
  /// z = (.1, .3, .5, .7, .9), c = (1, -.8, .6, -.4, .9).
  std::string target = "representer5";
  std::vector<Eigen::Index> sizes = {64, 128, 256, 512, 1024, 2048};
  Eigen::Index replications = 5;
  double lambda_constant = 0.01;  // lambda_n = c / n
  double noise_sd = 0.1;
  Eigen::Index grid_points = 1000;
  std::uint64_t seed = 20260101;
};

/// For each n: n uniform inputs on [0, 1], y = f0(x) + N(0, noise_sd^2), KRR
/// with lambda_n, predictions clipped to 2 max|f0|, squared L2 error on a
/// midpoint grid, averaged over replications. The slope is fitted to
/// log error against log n; theory is -2 beta / (2 beta + 1) with beta = alpha.
RateExperimentResult run_rate_experiment(const RateConfig& config);

}  // namespace kgp
