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
#include <optional>

#include "kgp/errors.hpp"
#include "kgp/linalg.hpp"
#include "kgp/quadrature.hpp"
#include "support.hpp"

using namespace kgp;
using kgp::test::pts;
using kgp::test::vec;

namespace {

DiscreteMeasure random_target(std::uint64_t seed, Eigen::Index m, Eigen::Index d) {
  Rng rng = make_rng(seed, 60);
  Vector w = uniform_points(rng, m, 1, 0.1, 1.0).col(0);
  return DiscreteMeasure{uniform_points(rng, m, d, 0.0, 1.0), w / w.sum()};
}

}  // namespace

TEST_CASE("quadrature on the target atoms") {
  const Kernel k = Kernel::matern(1.5, 0.5);
  const Points X = kgp::test::random_points(1, 6, 2);
  const QuadratureRule rule = kq_weights(k, X, DiscreteMeasure::uniform(X), 0.0);
  CHECK((rule.weights.array() - 1.0 / 6.0).abs().maxCoeff() <= 1e-12);
  const QuadratureIdentityReport r = verify_bq_kq_identity(rule);
  CHECK(std::abs(r.variance) <= 1e-10);
  CHECK(std::abs(r.mmd2) <= 1e-10);
  // Constants are integrated exactly.
  CHECK(bq_posterior(rule, Vector::Constant(6, 3.5), 0.0).mean == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("one-node rule") {
  const Kernel k = Kernel::scaled(Kernel::square_exponential(1.0), 2.0);
  const DiscreteMeasure P{pts({{0.3}, {0.9}}), vec({0.5, 0.5})};
  const QuadratureRule rule = kq_weights(k, pts({{0.0}}), P, 0.0);
  const double mu = 0.5 * k(vec({0.0}), vec({0.3})) + 0.5 * k(vec({0.0}), vec({0.9}));
  CHECK(rule.weights[0] == doctest::Approx(mu / 2.0).epsilon(1e-15));
  const double pp = 0.25 * (k(vec({0.3}), vec({0.3})) + 2 * k(vec({0.3}), vec({0.9})) + k(vec({0.9}), vec({0.9})));
  CHECK(rule.target_double_integral == doctest::Approx(pp).epsilon(1e-15));
  const QuadratureIdentityReport r = verify_bq_kq_identity(rule);
  CHECK(r.variance == doctest::Approx(pp - mu * mu / 2.0).epsilon(1e-13));
  CHECK(r.gap <= 1e-8);
}

TEST_CASE("two-node instance against a dense solve") {
  // SE gamma = 1, nodes {0, 1}, target uniform on {1/4, 1/2, 3/4}, f = (1, 2).
  const Kernel k = Kernel::square_exponential(1.0);
  const DiscreteMeasure P = DiscreteMeasure::uniform(pts({{0.25}, {0.5}, {0.75}}));
  const QuadratureRule exact = kq_weights(k, pts({{0.0}, {1.0}}), P, 0.0);
  const BQPosterior a = bq_posterior(exact, vec({1.0, 2.0}), 0.0);
  CHECK(a.mean == doctest::Approx(1.6726595939305726).epsilon(1e-12));
  CHECK(a.variance == doctest::Approx(0.07346385038036085).epsilon(1e-10));
  // lambda = 0.05, s2 = n lambda = 0.1.
  const QuadratureRule reg = kq_weights(k, pts({{0.0}, {1.0}}), P, 0.05);
  const BQPosterior b = bq_posterior(reg, vec({1.0, 2.0}), 0.05);
  CHECK(b.mean == doctest::Approx(1.5587088465452352).epsilon(1e-12));
  CHECK(b.variance == doctest::Approx(0.1314013905207686).epsilon(1e-10));
  CHECK_THROWS_AS(bq_posterior(reg, vec({1.0, 2.0}), 0.0), InputError);
  CHECK_THROWS_AS(bq_posterior(reg, vec({1.0}), 0.05), InputError);
}

TEST_CASE("zero integrand leaves the variance") {
  const QuadratureRule rule = kq_weights(Kernel::matern(2.5, 0.4), kgp::test::random_points(2, 5, 1),
                                         random_target(2, 7, 1), 0.0);
  const BQPosterior zero = bq_posterior(rule, Vector::Zero(5), 0.0);
  const BQPosterior one = bq_posterior(rule, Vector::Ones(5), 0.0);
  CHECK(zero.mean == 0.0);
  CHECK(zero.variance == one.variance);
}

TEST_CASE("posterior mean is the weighted sum and the identity holds") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng = make_rng(seed, 61);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(seed % 2);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 12);
    const Points X = uniform_points(rng, n, d, 0.0, 1.0);
    const DiscreteMeasure P = random_target(seed, 1 + static_cast<Eigen::Index>(rng() % 10), d);
    // Integrands live in the RKHS: f = sum_j c_j k(., z_j).
    const Points Z = uniform_points(rng, 3, d, 0.0, 1.0);
    const Vector c = standard_normal(rng, 3);
    for (const Kernel& k : kgp::test::strictly_pd_zoo()) {
      const Vector f = gram(k, X, Z) * c;
      std::optional<QuadratureRule> maybe;
      try {
        maybe = kq_weights(k, X, P, 0.0);
      } catch (const NumericalError&) {
        continue;  // nearly coincident nodes
      }
      const QuadratureRule& rule = *maybe;
      const QuadratureIdentityReport r = verify_bq_kq_identity(rule);
      CHECK(r.gap <= 1e-8);
      CHECK(r.variance >= -1e-10);
      const BQPosterior post = bq_posterior(rule, f, 0.0);
      CHECK(std::abs(post.mean - rule.weights.dot(f)) <= 1e-10);

      const double lambda = 0.01;
      const QuadratureRule reg = kq_weights(k, X, P, lambda);
      const Matrix A = with_diagonal(gram(k, X), static_cast<double>(n) * lambda);
      CHECK((A * reg.weights - reg.target_mean_at_nodes).norm() <= 1e-10);
      CHECK(std::abs(bq_posterior(reg, f, lambda).mean - reg.weights.dot(f)) <= 1e-10);
    }
  }
}

TEST_CASE("quadrature weights minimise the discrepancy") {
  const Kernel k = Kernel::matern(1.5, 0.4);
  const Points X = kgp::test::random_points(3, 6, 1);
  const DiscreteMeasure P = random_target(3, 20, 1);
  const QuadratureRule rule = kq_weights(k, X, P, 0.0);
  const double best = mmd(k, DiscreteMeasure{X, rule.weights}, P);
  Rng rng = make_rng(3, 3);
  for (int t = 0; t < 100; ++t) {
    Vector u = standard_normal(rng, 6);
    u /= u.norm();
    CHECK(mmd(k, DiscreteMeasure{X, rule.weights + 1e-3 * u}, P) >= best);
  }
}

TEST_CASE("adding a node never increases the posterior variance") {
  const Kernel k = Kernel::matern(2.5, 0.3);
  const Points X = kgp::test::random_points(4, 12, 1);
  const DiscreteMeasure P = random_target(4, 15, 1);
  double previous = INFINITY;
  for (Eigen::Index n = 1; n <= 12; ++n) {
    const QuadratureRule rule = kq_weights(k, X.topRows(n), P, 0.0);
    const double v = bq_posterior(rule, Vector::Zero(n), 0.0).variance;
    CHECK(v <= previous + 1e-10);
    previous = v;
  }
}

TEST_CASE("quadrature rejects bad input") {
  const Kernel k = Kernel::square_exponential(1.0);
  const DiscreteMeasure P = DiscreteMeasure::uniform(pts({{0.5}}));
  CHECK_THROWS_AS(kq_weights(k, pts({{0.1}, {0.1}}), P, 0.0), NumericalError);
  CHECK_NOTHROW(kq_weights(k, pts({{0.1}, {0.1}}), P, 0.1));
  CHECK_THROWS_AS(kq_weights(k, pts({{0.1}}), P, -1.0), InputError);
  CHECK_THROWS_AS(verify_bq_kq_identity(kq_weights(k, pts({{0.1}}), P, 0.1)), PreconditionError);
}

TEST_CASE("fill distance") {
  const Box unit = Box::unit(1);
  const Points X = pts({{0.0}, {0.5}, {1.0}});
  CHECK(fill_distance(unit, X, vec({0.5}), 1.0, 1.0 / 1024) == 0.25);
  // The query is a node: bounded by rho.
  CHECK(fill_distance(unit, pts({{0.5}}), vec({0.5}), 0.1, 1.0 / 1024) <= 0.1);
  // Coarse grids underestimate by at most the grid diameter.
  const Box square = Box::unit(2);
  const Points Y = kgp::test::random_points(5, 7, 2);
  const Vector x = vec({0.4, 0.6});
  const double fine = fill_distance(square, Y, x, 0.3, 1.0 / 512);
  const double coarse = fill_distance(square, Y, x, 0.3, 1.0 / 64);
  CHECK(coarse <= fine + std::sqrt(2.0) / 64);
  CHECK(fine <= coarse + std::sqrt(2.0) / 64);
  CHECK_THROWS_AS(fill_distance(unit, X, vec({0.5}), 1.0, 0.0), InputError);
  CHECK_THROWS_AS(fill_distance(unit, X, vec({5.0}), 1.0, 0.01), InputError);
}

TEST_CASE("posterior variance contracts with the fill distance") {
  const std::vector<Eigen::Index> sizes = {8, 16, 32, 64, 128};
  const ContractionReport laplace = variance_contraction_experiment(Kernel::matern(0.5, 1.0), 0.37, sizes);
  CHECK(laplace.theoretical_slope == 1.0);
  CHECK(laplace.fitted_slope >= 0.8);
  CHECK(laplace.fitted_slope <= 1.4);
  REQUIRE(laplace.grids.size() == 5);
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(laplace.grids[i].fill_distance < laplace.grids[i - 1].fill_distance);
    CHECK(laplace.grids[i].posterior_variance < laplace.grids[i - 1].posterior_variance);
  }
  const ContractionReport smooth = variance_contraction_experiment(Kernel::matern(2.5, 0.25), 0.37, sizes);
  CHECK(smooth.theoretical_slope == 5.0);
  CHECK(smooth.fitted_slope >= 4.0);
  CHECK_THROWS_AS(variance_contraction_experiment(Kernel::matern(0.5, 1.0), 0.37, {8}), InputError);
  CHECK_THROWS_AS(variance_contraction_experiment(Kernel::square_exponential(1.0), 0.37, sizes), InputError);
  CHECK(fit_slope({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}) == doctest::Approx(2.0));
}
