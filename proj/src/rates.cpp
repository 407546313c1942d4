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

#include "kgp/rates.hpp"

#include <algorithm>
#include <cmath>

#include "kgp/duality.hpp"
#include "kgp/errors.hpp"
#include "kgp/krr.hpp"
#include "kgp/quadrature.hpp"
#include "kgp/rng.hpp"

namespace kgp {

namespace {

RepresenterFunction target_function(const std::string& id) {
  if (id != "representer5") throw InputError("rates: unknown target '" + id + "'");
  Points z(5, 1);
  z << 0.1, 0.3, 0.5, 0.7, 0.9;
  Vector c(5);
  c << 1.0, -0.8, 0.6, -0.4, 0.9;
  return RepresenterFunction{z, c};
}

}  // namespace

RateExperimentResult run_rate_experiment(const RateConfig& config) {
  const auto* m = std::get_if<Kernel::Matern>(&config.kernel.family());
  if (m == nullptr) throw InputError("rates: the kernel must be Matern");
  if (config.sizes.size() < 3) throw InputError("rates: need at least 3 sample sizes");
  for (std::size_t i = 0; i < config.sizes.size(); ++i) {
    if (config.sizes[i] < 1 || (i > 0 && config.sizes[i] <= config.sizes[i - 1])) {
      throw InputError("rates: sample sizes must be positive and strictly increasing");
    }
  }
  if (config.replications < 1) throw InputError("rates: replications must be >= 1");
  if (!(config.lambda_constant > 0.0)) throw InputError("rates: lambda constant must be > 0");
  if (config.grid_points < 2) throw InputError("rates: grid needs at least 2 points");

  const RepresenterFunction f0 = target_function(config.target);
  Points grid(config.grid_points, 1);
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    grid(i, 0) = (static_cast<double>(i) + 0.5) / static_cast<double>(grid.rows());
  }
  const Vector f_grid = f0.at(config.kernel, grid);
  const double clip = 2.0 * f_grid.cwiseAbs().maxCoeff();

  RateExperimentResult out;
  out.sample_sizes = config.sizes;
  out.theoretical_slope = -2.0 * m->alpha / (2.0 * m->alpha + 1.0);
  std::vector<double> log_n, log_e;
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    const Eigen::Index n = config.sizes[s];
    const double lambda = config.lambda_constant / static_cast<double>(n);
    double total = 0.0;
    for (Eigen::Index r = 0; r < config.replications; ++r) {
      Rng rng = make_rng(config.seed, s * 1000003ULL + static_cast<std::uint64_t>(r));
      const Points X = uniform_points(rng, n, 1, 0.0, 1.0);
      const Vector y = f0.at(config.kernel, X) + config.noise_sd * standard_normal(rng, n);
      const KRREstimator est = fit_krr(config.kernel, Dataset{X, y}, lambda).clipped(clip);
      total += (est.predict_at(grid) - f_grid).squaredNorm() / static_cast<double>(grid.rows());
    }
    out.errors.push_back(total / static_cast<double>(config.replications));
    log_n.push_back(std::log(static_cast<double>(n)));
    log_e.push_back(std::log(out.errors.back()));
  }
  out.fitted_slope = fit_slope(log_n, log_e);
  return out;
}

}  // namespace kgp
