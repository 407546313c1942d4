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
#include <string_view>
#include <vector>

#include "kgp/report.hpp"

// Randomised identity suites. Trial t of a suite draws its instance from the
// RNG stream (seed, suite, t), so a suite gives the same cases whether it is
// run alone or as part of "all", and regardless of the thread count.

namespace kgp {

/// gp-krr, posterior-variance, mmd-average-case, bq-kq, hsic-gp, shrinkage-bayes.
const std::vector<std::string>& suite_names();

struct SuiteOptions {
  std::int64_t trials = 200;
  std::uint64_t seed = 0;
  std::int64_t mc_draws = 10000;
};

/// Runs one suite or "all". Unknown names are an InputError.
Report run_suite(std::string_view suite, const SuiteOptions& options);

}  // namespace kgp
