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

#include "kgp/errors.hpp"
#include "kgp/gp.hpp"
#include "kgp/krr.hpp"
#include "support.hpp"

using namespace kgp;
using kgp::test::pts;
using kgp::test::vec;

TEST_CASE("scalar ridge solve") {
  const KRREstimator f = fit_krr(Kernel::square_exponential(1.0), Dataset{pts({{0.3}}), vec({2.0})}, 1.0);
  CHECK(f.coefficients()[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.predict(vec({0.3})) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("heavy regularisation shrinks to zero") {
  const Points X = kgp::test::random_points(1, 10, 2);
  const Vector Y = kgp::test::random_normal(1, 10);
  const KRREstimator f = fit_krr(Kernel::matern(1.5, 0.5), Dataset{X, Y}, 1e6);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(f.predict(X.row(i).transpose())) <= 1e-3);
}

TEST_CASE("ridge solution minimises the regularised risk") {
  const Points X = kgp::test::random_points(2, 8, 2);
  const Vector Y = kgp::test::random_normal(2, 8);
  const Kernel k = Kernel::square_exponential(0.5);
  const double lambda = 0.01;
  const KRREstimator f = fit_krr(k, Dataset{X, Y}, lambda);
  const double best = krr_objective(k, Dataset{X, Y}, lambda, f.coefficients());
  Rng rng = make_rng(99, 0);
  for (int t = 0; t < 50; ++t) {
    Vector u = standard_normal(rng, 8);
    u /= u.norm();
    CHECK(krr_objective(k, Dataset{X, Y}, lambda, f.coefficients() + 1e-3 * u) >= best);
  }
}

TEST_CASE("ridge coefficients solve the regularised system") {
  const Points X = kgp::test::random_points(4, 25, 3);
  const Vector Y = kgp::test::random_normal(4, 25);
  for (const Kernel& k : kgp::test::family_zoo()) {
    const double lambda = 1e-3;
    const KRREstimator f = fit_krr(k, Dataset{X, Y}, lambda);
    const Matrix A = with_diagonal(gram(k, X), 25 * lambda);
    CHECK((A * f.coefficients() - Y).norm() <= 1e-10 * std::max(1.0, Y.norm()));
  }
}

TEST_CASE("duplicated inputs are fine with ridge") {
  const Points X = pts({{0.1}, {0.1}, {0.5}, {0.5}});
  const Vector Y = vec({1.0, 3.0, -1.0, -1.0});
  const KRREstimator f = fit_krr(Kernel::matern(0.5, 1.0), Dataset{X, Y}, 1e-3);
  CHECK(std::isfinite(f.predict(vec({0.3}))));
  // Duplicates pull towards their average.
  CHECK(std::abs(f.predict(vec({0.1})) - 2.0) < 0.1);
}

TEST_CASE("ridge regression equals the GP posterior mean with s2 = n lambda") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng = make_rng(seed, 3);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 40);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng() % 3);
    const Points X = uniform_points(rng, n, d, 0.0, 1.0);
    const Vector Y = standard_normal(rng, n);
    const Points Q = uniform_points(rng, 20, d, -0.2, 1.2);
    const double lambda = std::pow(10.0, -4.0 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng));
    for (const Kernel& k : kgp::test::family_zoo()) {
      const KRREstimator f = fit_krr(k, Dataset{X, Y}, lambda);
      const GPPosterior post =
          condition(GPPrior{k, {}}, Dataset{X, Y}, static_cast<double>(n) * lambda);
      for (int q = 0; q < 20; ++q) {
        CHECK(std::abs(f.predict(Q.row(q).transpose()) - post.mean(Q.row(q).transpose())) <= 1e-8);
      }
    }
  }
}

TEST_CASE("interpolant equals the noise-free GP mean") {
  const Points X = kgp::test::random_points(6, 12, 2);
  const Vector Y = kgp::test::random_normal(6, 12);
  const Points Q = kgp::test::random_points(7, 20, 2);
  for (const Kernel& k : kgp::test::strictly_pd_zoo()) {
    const KRREstimator f = fit_interpolant(k, Dataset{X, Y});
    const GPPosterior post = condition(GPPrior{k, {}}, Dataset{X, Y}, 0.0);
    for (int i = 0; i < 12; ++i) CHECK(std::abs(f.predict(X.row(i).transpose()) - Y[i]) <= 1e-8);
    for (int q = 0; q < 20; ++q) {
      CHECK(std::abs(f.predict(Q.row(q).transpose()) - post.mean(Q.row(q).transpose())) <= 1e-8);
    }
  }
}

TEST_CASE("conflicting duplicates make the interpolant singular") {
  CHECK_THROWS_AS(fit_interpolant(Kernel::square_exponential(1.0),
                                  Dataset{pts({{0.2}, {0.2}}), vec({0.0, 1.0})}),
                  NumericalError);
}

TEST_CASE("one-point interpolant") {
  const Kernel k = Kernel::scaled(Kernel::square_exponential(1.0), 4.0);
  const KRREstimator f = fit_interpolant(k, Dataset{pts({{0.5}}), vec({-3.0})});
  CHECK(f.coefficients()[0] == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(rkhs_norm(f) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("interpolant has minimum norm among interpolants") {
  const Kernel k = Kernel::matern(1.5, 0.4);
  const Points X = pts({{0.1}, {0.45}, {0.9}});
  const Vector Y = vec({1.0, -0.5, 0.25});
  const KRREstimator f = fit_interpolant(k, Dataset{X, Y});
  const double norm = rkhs_norm(f);
  const Matrix KXX = gram(k, X);
  Rng rng = make_rng(5, 0);
  for (int t = 0; t < 50; ++t) {
    // g = sum_j b_j k(., z_j) minus its own interpolant on X vanishes on X.
    const Points Z = uniform_points(rng, 2, 1, 0.0, 1.0);
    const Vector b = standard_normal(rng, 2);
    const Vector gx = gram(k, X, Z) * b;
    Points all(5, 1);
    all << X, Z;
    Vector c(5);
    c << f.coefficients() - KXX.ldlt().solve(gx), b;
    const double perturbed = std::sqrt(c.dot(gram(k, all) * c));
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(gram_column(k, all, X.row(i).transpose()).dot(c) - Y[i]) <= 1e-8);
    }
    CHECK(perturbed >= norm - 1e-12);
  }
}

TEST_CASE("rkhs norm matches a double loop") {
  const Points X = kgp::test::random_points(8, 9, 2);
  const Kernel k = Kernel::matern(2.5, 0.3);
  const Vector alpha = kgp::test::random_normal(8, 9);
  const KRREstimator f(k, X, alpha, 0.1);
  double s = 0.0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) s += alpha[i] * alpha[j] * k(X.row(i).transpose(), X.row(j).transpose());
  CHECK(rkhs_norm(f) == doctest::Approx(std::sqrt(s)).epsilon(1e-13));
  CHECK(rkhs_norm(KRREstimator(k, X, Vector::Zero(9), 0.1)) == 0.0);
}

TEST_CASE("clipping bounds predictions without touching coefficients") {
  const Points X = pts({{0.0}, {1.0}});
  const KRREstimator f = fit_krr(Kernel::square_exponential(1.0), Dataset{X, vec({10.0, -10.0})}, 1e-4);
  const KRREstimator g = f.clipped(1.0);
  CHECK(g.clip_bound().value() == 1.0);
  CHECK((g.coefficients().array() == f.coefficients().array()).all());
  for (double t = -1.0; t <= 2.0; t += 0.1) {
    CHECK(std::abs(g.predict(vec({t}))) <= 1.0);
    CHECK(g.predict_raw(vec({t})) == f.predict(vec({t})));
  }
  CHECK_THROWS_AS(f.clipped(0.0), InputError);
}

TEST_CASE("ridge rejects bad arguments") {
  const Kernel k = Kernel::square_exponential(1.0);
  CHECK_THROWS_AS(fit_krr(k, Dataset{pts({{0.0}}), vec({1.0})}, 0.0), InputError);
  CHECK_THROWS_AS(fit_krr(k, Dataset{Points(0, 1), Vector(0)}, 0.1), InputError);
  CHECK_THROWS_AS(fit_krr(k, Dataset{pts({{0.0}}), std::nullopt}, 0.1), InputError);
}
