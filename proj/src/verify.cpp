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

#include "kgp/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <random>

#include "kgp/dependence.hpp"
#include "kgp/duality.hpp"
#include "kgp/embeddings.hpp"
#include "kgp/errors.hpp"
#include "kgp/gp.hpp"
#include "kgp/krr.hpp"
#include "kgp/linalg.hpp"
#include "kgp/quadrature.hpp"
#include "kgp/rng.hpp"
#include "kgp/spectral.hpp"

namespace kgp {

namespace {

constexpr double kEquivalenceTol = 1e-8;
constexpr double kExactTol = 1e-10;
constexpr double kMonteCarloSigmas = 5.0;
// Noise-free instances are resampled until cond(K_XX) is at most this.
constexpr double kMaxCondition = 1e8;

class Draw {
 public:
  explicit Draw(Rng& rng) : rng_(rng) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  Eigen::Index integer(Eigen::Index lo, Eigen::Index hi) {
    return std::uniform_int_distribution<Eigen::Index>(lo, hi)(rng_);
  }
  Points points(Eigen::Index n, Eigen::Index d) { return uniform_points(rng_, n, d, 0.0, 1.0); }
  Vector normal(Eigen::Index n) { return standard_normal(rng_, n); }
  Vector simplex(Eigen::Index n) {
    Vector w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = uniform(0.1, 1.0);
    return w / w.sum();
  }
  std::uint64_t seed() { return rng_(); }

 private:
  Rng& rng_;
};

Kernel random_kernel(Draw& r, bool allow_polynomial) {
  switch (r.integer(0, allow_polynomial ? 6 : 5)) {
    case 0:
      return Kernel::square_exponential(r.log_uniform(0.3, 2.0));
    case 1:
      return Kernel::matern(0.5, r.log_uniform(0.3, 2.0));
    case 2:
      return Kernel::matern(1.5, r.log_uniform(0.3, 2.0));
    case 3:
      return Kernel::matern(2.5, r.log_uniform(0.3, 2.0));
    case 4:
      return Kernel::sum(Kernel::square_exponential(r.log_uniform(0.3, 2.0)),
                         Kernel::matern(0.5, r.log_uniform(0.3, 2.0)));
    case 5:
      return Kernel::scaled(Kernel::product(Kernel::square_exponential(r.log_uniform(0.5, 2.0)),
                                            Kernel::matern(1.5, r.log_uniform(0.5, 2.0))),
                            r.uniform(0.5, 3.0));
    default:
      return Kernel::polynomial(static_cast<int>(r.integer(1, 3)), r.uniform(0.5, 2.0));
  }
}

// Dimension of the feature space of a polynomial kernel, or n_max otherwise.
Eigen::Index max_nodes(const Kernel& k, Eigen::Index d, Eigen::Index n_max) {
  const auto* p = std::get_if<Kernel::Polynomial>(&k.family());
  if (p == nullptr) return n_max;
  double dim = 1.0;
  for (int i = 1; i <= p->degree; ++i) dim = dim * static_cast<double>(d + i) / i;
  return std::min<Eigen::Index>(n_max, static_cast<Eigen::Index>(std::lround(dim)));
}

Points well_conditioned_points(Draw& r, const Kernel& k, Eigen::Index n, Eigen::Index d) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Points X = r.points(n, d);
    if (condition_number(gram(k, X)) <= kMaxCondition) return X;
    if (attempt % 8 == 7) n = std::max<Eigen::Index>(1, n * 3 / 4);
  }
  return r.points(1, d);
}

std::string trial_id(std::string_view suite, std::int64_t t) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04lld", static_cast<long long>(t));
  return std::string(suite) + "/" + buf;
}

CaseResult errored(std::string id, const std::exception& e) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CaseResult c = make_case(std::move(id), "", nan, nan, nan, 0.0);
  c.passed = false;
  c.error = e.what();
  return c;
}

using TrialFn = std::function<std::vector<CaseResult>(Draw&, const std::string&, const SuiteOptions&)>;

std::vector<CaseResult> gp_krr_trial(Draw& r, const std::string& id, const SuiteOptions&) {
  const Eigen::Index d = r.integer(1, 3);
  const Eigen::Index n = r.integer(1, 40);
  const Kernel k = random_kernel(r, true);
  const double lambda = r.log_uniform(1e-4, 1e-1);
  const Dataset data{r.points(n, d), r.normal(n)};
  const Points Q = r.points(20, d);

  const GPPosterior post = condition(GPPrior{k, {}}, data, static_cast<double>(n) * lambda);
  const KRREstimator est = fit_krr(k, data, lambda);
  double gap = -1.0, lhs = 0.0, rhs = 0.0;
  for (Eigen::Index q = 0; q < Q.rows(); ++q) {
    const double m = post.mean(Q.row(q).transpose());
    const double f = est.predict_raw(Q.row(q).transpose());
    if (std::abs(m - f) > gap) {
      gap = std::abs(m - f);
      lhs = m;
      rhs = f;
    }
  }
  Digest dg;
  dg.add(k.to_string()).add(data.X).add(*data.Y).add(lambda).add(Q);
  return {make_case(id, dg.hex(), lhs, rhs, gap, kEquivalenceTol)};
}

std::vector<CaseResult> posterior_variance_trial(Draw& r, const std::string& id, const SuiteOptions&) {
  std::vector<CaseResult> out;
  {
    const Eigen::Index d = r.integer(1, 3);
    const Kernel k = random_kernel(r, true);
    const Points X = well_conditioned_points(r, k, r.integer(1, max_nodes(k, d, 30)), d);
    const Vector x = r.points(1, d).transpose();
    const IdentityReport rep = verify_noise_free_identity(k, X, x);
    Digest dg;
    dg.add(k.to_string()).add(X).add(x);
    out.push_back(make_case(id + "/noise-free", dg.hex(), rep.lhs, rep.rhs, rep.gap, kEquivalenceTol));
  }
  {
    const Eigen::Index d = r.integer(1, 3);
    const Kernel k = random_kernel(r, true);
    const Points X = r.points(r.integer(1, 40), d);
    const double s2 = r.log_uniform(1e-3, 1.0);
    const Vector x = r.points(1, d).transpose();
    const IdentityReport rep = verify_noisy_identity(k, X, s2, x);
    Digest dg;
    dg.add(k.to_string()).add(X).add(s2).add(x);
    out.push_back(make_case(id + "/noisy", dg.hex(), rep.lhs, rep.rhs, rep.gap, kEquivalenceTol));
  }
  return out;
}

std::vector<CaseResult> mmd_average_case_trial(Draw& r, const std::string& id, const SuiteOptions& o) {
  const Eigen::Index d = r.integer(1, 3);
  const Kernel k = random_kernel(r, false);
  const Eigen::Index mp = r.integer(1, 10);
  const DiscreteMeasure P{r.points(mp, d), r.simplex(mp)};
  DiscreteMeasure Q;
  switch (r.integer(0, 9)) {
    case 0:
      Q = P;
      break;
    case 1:
    case 2: {
      // Q shares some atoms with P.
      const Eigen::Index mq = r.integer(1, 10);
      Q.atoms = r.points(mq, d);
      for (Eigen::Index i = 0; i < std::min(mp, mq); i += 2) Q.atoms.row(i) = P.atoms.row(i);
      Q.weights = r.simplex(mq);
      break;
    }
    default: {
      const Eigen::Index mq = r.integer(1, 10);
      Q = DiscreteMeasure{r.points(mq, d), r.simplex(mq)};
    }
  }
  const std::uint64_t mc_seed = r.seed();
  const AverageCaseReport rep = verify_average_case(k, P, Q, o.mc_draws, mc_seed);
  Digest dg;
  dg.add(k.to_string()).add(P.atoms).add(P.weights).add(Q.atoms).add(Q.weights);
  const std::string digest = dg.hex();
  return {make_case(id + "/exact", digest, rep.mmd2, rep.gp_variance, rep.gap, kExactTol),
          make_case(id + "/monte-carlo", digest, rep.mc_estimate, rep.gp_variance,
                    std::abs(rep.mc_estimate - rep.gp_variance), kMonteCarloSigmas * rep.mc_se)};
}

std::vector<CaseResult> bq_kq_trial(Draw& r, const std::string& id, const SuiteOptions&) {
  const Eigen::Index d = r.integer(1, 3);
  const Kernel k = random_kernel(r, false);
  const Points X = well_conditioned_points(r, k, r.integer(1, 25), d);
  DiscreteMeasure target;
  if (r.integer(0, 9) == 0) {
    target = DiscreteMeasure::uniform(X);
  } else {
    const Eigen::Index m = r.integer(1, 30);
    target = DiscreteMeasure{r.points(m, d), r.simplex(m)};
  }
  // Integrand in H_k: f = sum_j c_j k(., z_j).
  const Eigen::Index centres = r.integer(1, 5);
  const RepresenterFunction g{r.points(centres, d), r.normal(centres)};
  const Vector f = g.at(k, X);
  const double lambda = r.log_uniform(1e-4, 1e-1);

  Digest dg;
  dg.add(k.to_string()).add(X).add(target.atoms).add(target.weights).add(f).add(lambda);
  const std::string digest = dg.hex();

  const QuadratureRule rule = kq_weights(k, X, target, 0.0);
  const QuadratureIdentityReport rep = verify_bq_kq_identity(rule);
  const BQPosterior post = bq_posterior(rule, f, 0.0);
  const double pn = rule.weights.dot(f);

  const QuadratureRule reg = kq_weights(k, X, target, lambda);
  const BQPosterior noisy = bq_posterior(reg, f, lambda);
  const double pn_reg = reg.weights.dot(f);

  return {make_case(id + "/identity", digest, rep.variance, rep.mmd2, rep.gap, kEquivalenceTol),
          make_case(id + "/mean", digest, post.mean, pn, std::abs(post.mean - pn), kExactTol),
          make_case(id + "/regularised-mean", digest, noisy.mean, pn_reg, std::abs(noisy.mean - pn_reg),
                    kExactTol)};
}

std::vector<CaseResult> hsic_gp_trial(Draw& r, const std::string& id, const SuiteOptions& o) {
  const Eigen::Index n = r.integer(2, 50);
  const Eigen::Index dx = r.integer(1, 3);
  const Eigen::Index dy = r.integer(1, 3);
  const Kernel kx = random_kernel(r, true);
  const Kernel ky = random_kernel(r, true);
  PairedSample s{r.points(n, dx), Points()};
  if (r.integer(0, 19) == 0) s.X.rowwise() = s.X.row(0);
  s.Y = r.points(n, dy) * 0.3;
  for (Eigen::Index j = 0; j < dy; ++j) s.Y.col(j) += r.uniform(-1.0, 1.0) * s.X.col(0);
  const std::uint64_t mc_seed = r.seed();

  const double exact = hsic_gp_exact(kx, ky, s);
  const double empirical = hsic_empirical(kx, ky, s);
  const MonteCarloEstimate mc = hsic_gp_monte_carlo(kx, ky, s, o.mc_draws, mc_seed);
  Digest dg;
  dg.add(kx.to_string()).add(ky.to_string()).add(s.X).add(s.Y);
  const std::string digest = dg.hex();
  return {make_case(id + "/exact", digest, exact, empirical, std::abs(exact - empirical), kExactTol),
          make_case(id + "/monte-carlo", digest, mc.estimate, exact, std::abs(mc.estimate - exact),
                    kMonteCarloSigmas * mc.standard_error)};
}

std::vector<CaseResult> shrinkage_bayes_trial(Draw& r, const std::string& id, const SuiteOptions&) {
  const Eigen::Index d = r.integer(1, 3);
  const Eigen::Index n = r.integer(2, 40);
  const Kernel k = random_kernel(r, true);
  const double lambda = r.log_uniform(1e-4, 1e-1);
  const Points X = r.points(n, d);

  const Vector shrunk = skme(k, X, lambda).at(X);
  const Matrix K = gram(k, X);
  const Matrix P = power_kernel(nystrom_eigensystem(k, X), 1.0);
  const Vector mu_hat = K * Vector::Constant(n, 1.0 / static_cast<double>(n));
  const Vector bayes = bayes_kmean_posterior_at_atoms(P, mu_hat, static_cast<double>(n) * lambda);

  Eigen::Index at = 0;
  const double gap = (shrunk - bayes).cwiseAbs().maxCoeff(&at);
  Digest dg;
  dg.add(k.to_string()).add(X).add(lambda);
  return {make_case(id, dg.hex(), shrunk[at], bayes[at], gap, kEquivalenceTol)};
}

struct SuiteEntry {
  std::string name;
  TrialFn fn;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> suites = {
      {"gp-krr", gp_krr_trial},
      {"posterior-variance", posterior_variance_trial},
      {"mmd-average-case", mmd_average_case_trial},
      {"bq-kq", bq_kq_trial},
      {"hsic-gp", hsic_gp_trial},
      {"shrinkage-bayes", shrinkage_bayes_trial},
  };
  return suites;
}

void run_one(std::size_t index, const SuiteOptions& o, std::vector<CaseResult>& out) {
  const SuiteEntry& entry = registry()[index];
  const std::uint64_t suite_seed = split_seed(o.seed, index + 1);
  std::vector<std::vector<CaseResult>> per(static_cast<std::size_t>(o.trials));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < o.trials; ++t) {
    const std::string id = trial_id(entry.name, t);
    Rng rng = make_rng(suite_seed, static_cast<std::uint64_t>(t));
    Draw draw(rng);
    try {
      per[static_cast<std::size_t>(t)] = entry.fn(draw, id, o);
    } catch (const std::exception& e) {
      per[static_cast<std::size_t>(t)] = {errored(id, e)};
    }
  }
  for (auto& cases : per) {
    for (auto& c : cases) out.push_back(std::move(c));
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const SuiteEntry& e : registry()) v.push_back(e.name);
    return v;
  }();
  return names;
}

Report run_suite(std::string_view suite, const SuiteOptions& options) {
  if (options.trials < 0) throw InputError("verify: trials must be >= 0");
  if (options.mc_draws < 2) throw InputError("verify: Monte Carlo draws must be >= 2");
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.suite = std::string(suite);
  report.seed = options.seed;
  report.trials = options.trials;
  bool found = suite == "all";
  for (std::size_t i = 0; i < registry().size(); ++i) {
    if (suite == "all" || suite == registry()[i].name) {
      found = true;
      run_one(i, options, report.cases);
    }
  }
  if (!found) throw InputError("verify: unknown suite '" + std::string(suite) + "'");
  report.normalise();
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace kgp
