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

#include "kgp/dependence.hpp"
#include "kgp/quadrature.hpp"

// Serial, loop-level versions of the parallel kernels. Tests compare the two
// and bench/ times them.

namespace kgp::reference {

Matrix gram(const Kernel& k, const Points& A, const Points& B);
Matrix gram(const Kernel& k, const Points& A);

double fill_distance(const Box& domain, const Points& X, PointRef x, double rho, double resolution);

/// Three-expectation double-sum form of the empirical HSIC:
/// mean k l + mean k * mean l - 2 mean_i (mean_j k_ij)(mean_j l_ij).
double hsic_double_sum(const Kernel& kx, const Kernel& ky, const PairedSample& sample);

}  // namespace kgp::reference
