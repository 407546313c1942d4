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

#include "kgp/kernels.hpp"

namespace kgp {

/// Row i is the pair (x_i, y_i).
struct PairedSample {
  Points X;
  Points Y;

  Eigen::Index size() const { return X.rows(); }
};

void validate(const PairedSample& s);

/// V-statistic (1/n^2) tr(K H L H) with H = I - (1/n) 1 1^T.
double hsic_empirical(const Kernel& kx, const Kernel& ky, const PairedSample& sample);

/// E_{f,g} ((1/n) f_X^T H g_Y)^2 for independent f ~ GP(0, kx), g ~ GP(0, ky),
/// in closed form: (1/n^2) sum_ij (H K H)_ij L_ij.
double hsic_gp_exact(const Kernel& kx, const Kernel& ky, const PairedSample& sample);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  Eigen::Index draws = 0;
};

/// Average of ((1/n) f_X^T H g_Y)^2 over `draws` independent GP pairs. f and g
/// are drawn on the distinct sample points only, so a constant column gives
/// exactly 0. Normals come from standard_normal_columns.
MonteCarloEstimate hsic_gp_monte_carlo(const Kernel& kx, const Kernel& ky, const PairedSample& sample,
                                       Eigen::Index draws, std::uint64_t seed);

/// HSIC with Brownian distance kernels on both sides.
double brownian_dcov(const PairedSample& sample);

/// Classical V-statistic distance covariance (1/n^2) sum_ij A_ij B_ij with
/// double-centred distance matrices.
double distance_covariance_v(const PairedSample& sample);

}  // namespace kgp
