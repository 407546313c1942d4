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

#include <doctest.h>

#include <cmath>

#include "kgp/dependence.hpp"
#include "kgp/embeddings.hpp"
#include "kgp/errors.hpp"
#include "kgp/reference.hpp"
#include "support.hpp"

using namespace kgp;
using kgp::test::pts;
using kgp::test::vec;

namespace {

PairedSample dependent_sample(std::uint64_t seed, Eigen::Index n, Eigen::Index dx, Eigen::Index dy) {
  Rng rng = make_rng(seed, 70);
  PairedSample s{uniform_points(rng, n, dx, 0.0, 1.0), uniform_points(rng, n, dy, 0.0, 0.3)};
  s.Y.col(0) += s.X.col(0);
  return s;
}

std::vector<std::pair<Kernel, Kernel>> kernel_pairs() {
  return {{Kernel::square_exponential(0.5), Kernel::square_exponential(0.7)},
          {Kernel::matern(0.5, 0.4), Kernel::matern(2.5, 1.0)},
          {Kernel::polynomial(2, 1.0), Kernel::matern(1.5, 0.3)},
          {Kernel::brownian_distance(), Kernel::brownian_distance()}};
}

}  // namespace

TEST_CASE("constant X has zero dependence") {
  PairedSample s = dependent_sample(1, 12, 2, 1);
  s.X.setConstant(0.3);
  const Kernel k = Kernel::square_exponential(1.0);
  CHECK(hsic_empirical(k, k, s) == 0.0);
  CHECK(hsic_gp_exact(k, k, s) == 0.0);
  const MonteCarloEstimate mc = hsic_gp_monte_carlo(k, k, s, 500, 3);
  CHECK(mc.estimate == 0.0);
  CHECK(mc.standard_error == 0.0);
}

TEST_CASE("two-point hand expansion") {
  const PairedSample s{pts({{0.0}, {1.0}}), pts({{0.2}, {0.9}})};
  const Kernel kx = Kernel::square_exponential(1.0);
  const Kernel ky = Kernel::matern(0.5, 1.0);
  // H K H = (dK / 4) [1 -1; -1 1] for n = 2, so HSIC = dK dL / 16.
  const double dK = 2.0 - 2.0 * std::exp(-1.0);
  const double dL = 2.0 - 2.0 * std::exp(-0.7);
  CHECK(hsic_empirical(kx, ky, s) == doctest::Approx(dK * dL / 16.0).epsilon(1e-14));
}

TEST_CASE("trace form matches the three-expectation double sum") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PairedSample s = dependent_sample(seed, 2 + static_cast<Eigen::Index>(seed) * 4, 1 + seed % 3, 1 + seed % 2);
    for (const auto& [kx, ky] : kernel_pairs()) {
      const double h = hsic_empirical(kx, ky, s);
      CHECK(std::abs(h - reference::hsic_double_sum(kx, ky, s)) <= 1e-10);
      CHECK(h >= -1e-12);
    }
  }
}

TEST_CASE("HSIC is the MMD between the joint and the product of marginals") {
  const PairedSample s = dependent_sample(4, 9, 2, 1);
  const Kernel kx = Kernel::matern(1.5, 0.5);
  const Kernel ky = Kernel::square_exponential(0.4);
  const Eigen::Index n = s.size();
  Points joint(n, 3), product(n * n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    joint.row(i) << s.X.row(i), s.Y.row(i);
    for (Eigen::Index j = 0; j < n; ++j) product.row(i * n + j) << s.X.row(i), s.Y.row(j);
  }
  const double m = mmd(Kernel::tensor(kx, ky, 2), DiscreteMeasure::uniform(joint), DiscreteMeasure::uniform(product));
  CHECK(m * m == doctest::Approx(hsic_empirical(kx, ky, s)).epsilon(1e-9));
}

TEST_CASE("GP identity holds exactly") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PairedSample s = dependent_sample(seed, 2 + static_cast<Eigen::Index>(seed % 15) * 3, 1 + seed % 3, 1 + seed % 3);
    for (const auto& [kx, ky] : kernel_pairs()) {
      CHECK(std::abs(hsic_gp_exact(kx, ky, s) - hsic_empirical(kx, ky, s)) <= 1e-10);
    }
  }
}

TEST_CASE("delta kernels give (n - 1) / n^2") {
  const PairedSample s = dependent_sample(5, 10, 1, 1);
  const Kernel d = Kernel::kronecker_delta(1.0);
  CHECK(hsic_gp_exact(d, d, s) == doctest::Approx(9.0 / 100.0).epsilon(1e-14));
  CHECK(hsic_empirical(d, d, s) == doctest::Approx(9.0 / 100.0).epsilon(1e-14));
}

TEST_CASE("Monte Carlo GP estimate") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const PairedSample s = dependent_sample(seed, 5 + static_cast<Eigen::Index>(seed) * 5, 2, 1);
    for (const auto& [kx, ky] : kernel_pairs()) {
      const MonteCarloEstimate mc = hsic_gp_monte_carlo(kx, ky, s, 10000, seed);
      CHECK(mc.draws == 10000);
      CHECK(std::abs(mc.estimate - hsic_gp_exact(kx, ky, s)) <= 5.0 * mc.standard_error);
    }
  }
  const PairedSample s = dependent_sample(9, 7, 1, 1);
  const Kernel k = Kernel::matern(0.5, 1.0);
  const MonteCarloEstimate a = hsic_gp_monte_carlo(k, k, s, 3000, 1);
  const MonteCarloEstimate b = hsic_gp_monte_carlo(k, k, s, 3000, 1);
  CHECK(a.estimate == b.estimate);
  CHECK(a.standard_error == b.standard_error);
  CHECK_THROWS_AS(hsic_gp_monte_carlo(k, k, s, 1, 1), InputError);
}

TEST_CASE("duplicated rows in the Monte Carlo estimate") {
  PairedSample s = dependent_sample(10, 12, 1, 1);
  s.X.row(3) = s.X.row(7);
  s.Y.row(5) = s.Y.row(1);
  s.X.row(9) = s.X.row(0);
  s.Y.row(9) = s.Y.row(0);
  const Kernel kx = Kernel::square_exponential(0.3);
  const Kernel ky = Kernel::matern(1.5, 0.2);
  const MonteCarloEstimate mc = hsic_gp_monte_carlo(kx, ky, s, 20000, 4);
  CHECK(std::abs(mc.estimate - hsic_gp_exact(kx, ky, s)) <= 5.0 * mc.standard_error);
}

TEST_CASE("HSIC invariances") {
  const PairedSample s = dependent_sample(11, 15, 2, 2);
  const Kernel kx = Kernel::matern(2.5, 0.6);
  const Kernel ky = Kernel::square_exponential(0.3);
  const double h = hsic_empirical(kx, ky, s);

  Eigen::PermutationMatrix<Eigen::Dynamic> perm(15);
  perm.setIdentity();
  std::shuffle(perm.indices().data(), perm.indices().data() + 15, make_rng(2, 2));
  const PairedSample permuted{perm * s.X, perm * s.Y};
  CHECK(hsic_empirical(kx, ky, permuted) == doctest::Approx(h).epsilon(1e-12));

  const PairedSample swapped{s.Y, s.X};
  CHECK(hsic_empirical(ky, kx, swapped) == doctest::Approx(h).epsilon(1e-12));

  CHECK(hsic_empirical(Kernel::scaled(kx, 3.0), ky, s) == doctest::Approx(3.0 * h).epsilon(1e-12));
  CHECK(hsic_gp_exact(Kernel::scaled(kx, 3.0), ky, s) == doctest::Approx(3.0 * hsic_gp_exact(kx, ky, s)).epsilon(1e-12));
}

TEST_CASE("Brownian HSIC is the distance covariance") {
  // Loop oracle on a 3-point colinear dependent instance: ratio 1 with the
  // coefficient-one Brownian kernel.
  const PairedSample tiny{pts({{0.0}, {1.0}, {2.0}}), pts({{0.0}, {2.0}, {4.0}})};
  CHECK(brownian_dcov(tiny) == doctest::Approx(distance_covariance_v(tiny)).epsilon(1e-12));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PairedSample s = dependent_sample(seed, 4 + static_cast<Eigen::Index>(seed) * 3, 1 + seed % 3, 1 + seed % 2);
    CHECK(brownian_dcov(s) / distance_covariance_v(s) == doctest::Approx(1.0).epsilon(1e-8));
  }
  PairedSample flat = dependent_sample(3, 8, 2, 1);
  flat.Y.setConstant(2.0);
  CHECK(std::abs(brownian_dcov(flat)) <= 1e-15);
  CHECK(std::abs(distance_covariance_v(flat)) <= 1e-15);
}

TEST_CASE("paired sample validation") {
  const Kernel k = Kernel::square_exponential(1.0);
  CHECK_THROWS_AS(hsic_empirical(k, k, PairedSample{pts({{0.0}}), pts({{1.0}})}), InputError);
  CHECK_THROWS_AS(hsic_empirical(k, k, PairedSample{pts({{0.0}, {1.0}}), pts({{1.0}})}), InputError);
  CHECK_THROWS_AS(hsic_empirical(k, k, PairedSample{pts({{0.0}, {NAN}}), pts({{1.0}, {2.0}})}), InputError);
}
