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

#include "kgp/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "kgp/errors.hpp"
#include "kgp/gp.hpp"
#include "kgp/linalg.hpp"

namespace kgp {

namespace {

Matrix regularised_gram(const QuadratureRule& rule, double lambda) {
  return with_diagonal(gram(rule.kernel, rule.nodes), static_cast<double>(rule.nodes.rows()) * lambda);
}

void check_lambda(double lambda, const char* who) {
  if (!std::isfinite(lambda) || lambda < 0.0) throw InputError(std::string(who) + ": lambda must be >= 0");
}

}  // namespace

QuadratureRule kq_weights(const Kernel& kernel, const Points& nodes, const DiscreteMeasure& target,
                          double lambda) {
  check_lambda(lambda, "kq_weights");
  validate(target);
  if (nodes.rows() == 0) throw InputError("kq_weights: no nodes");
  if (target.size() == 0) throw InputError("kq_weights: empty target measure");
  if (target.dim() != nodes.cols()) throw InputError("kq_weights: nodes and target differ in dimension");
  if (!nodes.allFinite()) throw InputError("kq_weights: non-finite nodes");

  QuadratureRule rule{kernel, nodes, target, Vector(), Vector(), 0.0, lambda};
  rule.target_mean_at_nodes = KernelMean(kernel, target).at(nodes);
  rule.target_double_integral = target.weights.dot(gram(kernel, target.atoms) * target.weights);

  const Matrix A = regularised_gram(rule, lambda);
  if (lambda > 0.0) {
    rule.weights = refine(A, cholesky_strict(A, "K_XX + n lambda I"), rule.target_mean_at_nodes);
  } else {
    rule.weights = refine(A, PivotedSolver(A, "K_XX"), rule.target_mean_at_nodes);
  }
  return rule;
}

BQPosterior bq_posterior(const QuadratureRule& rule, const Vector& f_values, double lambda) {
  check_lambda(lambda, "bq_posterior");
  if (lambda != rule.lambda) throw InputError("bq_posterior: lambda does not match the rule");
  if (f_values.size() != rule.nodes.rows()) {
    throw InputError("bq_posterior: expected " + std::to_string(rule.nodes.rows()) + " function values, got " +
                     std::to_string(f_values.size()));
  }
  const Matrix A = regularised_gram(rule, lambda);
  Vector alpha;
  if (lambda > 0.0) {
    alpha = refine(A, cholesky_strict(A, "K_XX + s2 I"), f_values);
  } else {
    alpha = refine(A, PivotedSolver(A, "K_XX"), f_values);
  }
  BQPosterior out;
  out.mean = rule.target_mean_at_nodes.dot(alpha);
  out.variance = rule.target_double_integral - rule.target_mean_at_nodes.dot(rule.weights);
  const double scale = std::max(1.0, std::abs(rule.target_double_integral));
  if (out.variance < -1e-10 * scale) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", out.variance);
    throw NumericalError(std::string("bq_posterior: negative posterior variance ") + buf);
  }
  return out;
}

QuadratureIdentityReport verify_bq_kq_identity(const QuadratureRule& rule) {
  if (rule.lambda != 0.0) throw PreconditionError("verify_bq_kq_identity: needs a lambda = 0 rule");
  QuadratureIdentityReport r;
  r.variance = bq_posterior(rule, Vector::Zero(rule.nodes.rows()), 0.0).variance;
  const double m = mmd(rule.kernel, DiscreteMeasure{rule.nodes, rule.weights}, rule.target);
  r.mmd2 = m * m;
  r.gap = std::abs(r.variance - r.mmd2);
  return r;
}

double fill_distance(const Box& domain, const Points& X, PointRef x, double rho, double resolution) {
  const Eigen::Index d = domain.dim();
  if (!(resolution > 0.0) || !std::isfinite(resolution)) throw InputError("fill_distance: resolution must be > 0");
  if (!(rho > 0.0)) throw InputError("fill_distance: rho must be > 0");
  if (domain.upper.size() != d || x.size() != d || X.cols() != d) {
    throw InputError("fill_distance: dimension mismatch");
  }
  if (X.rows() == 0) throw InputError("fill_distance: no nodes");

  // Index range per axis of lattice points inside the box and the ball's bounding box.
  std::vector<long long> lo(static_cast<std::size_t>(d)), count(static_cast<std::size_t>(d));
  long long total = 1;
  for (Eigen::Index a = 0; a < d; ++a) {
    const double L = domain.lower[a];
    const double top = std::floor((domain.upper[a] - L) / resolution + 1e-9);
    const double first = std::max(0.0, std::ceil((x[a] - rho - L) / resolution - 1e-9));
    const double last = std::min(top, std::floor((x[a] + rho - L) / resolution + 1e-9));
    if (last < first) throw InputError("fill_distance: no grid points within rho of x");
    lo[static_cast<std::size_t>(a)] = static_cast<long long>(first);
    count[static_cast<std::size_t>(a)] = static_cast<long long>(last - first) + 1;
    total *= count[static_cast<std::size_t>(a)];
  }

  const Matrix Xt = X.transpose();
  const double rho2 = rho * rho;
  double best = -1.0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (long long idx = 0; idx < total; ++idx) {
    Vector y(d);
    long long rem = idx;
    for (Eigen::Index a = d - 1; a >= 0; --a) {
      const auto ua = static_cast<std::size_t>(a);
      y[a] = domain.lower[a] + static_cast<double>(lo[ua] + rem % count[ua]) * resolution;
      rem /= count[ua];
    }
    if ((y - x).squaredNorm() > rho2) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < Xt.cols(); ++i) nearest = std::min(nearest, (Xt.col(i) - y).squaredNorm());
    best = std::max(best, nearest);
  }
  if (best < 0.0) throw InputError("fill_distance: no grid points within rho of x");
  return std::sqrt(best);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("fit_slope: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw InputError("fit_slope: degenerate abscissae");
  return sxy / sxx;
}

ContractionReport variance_contraction_experiment(const Kernel& kernel, double x,
                                                  const std::vector<Eigen::Index>& grid_sizes,
                                                  const ContractionConfig& config) {
  const auto* m = std::get_if<Kernel::Matern>(&kernel.family());
  if (m == nullptr) throw InputError("variance_contraction_experiment: needs a Matern kernel");
  if (grid_sizes.size() < 3) throw InputError("variance_contraction_experiment: needs at least 3 grid sizes");
  for (Eigen::Index n : grid_sizes) {
    if (n < 1) throw InputError("variance_contraction_experiment: grid sizes must be positive");
  }

  ContractionReport report;
  report.theoretical_slope = 2.0 * m->alpha;
  report.grids.resize(grid_sizes.size());
  const Box box = Box::unit(1);
  const Vector xq = Vector::Constant(1, x);
  for (std::size_t g = 0; g < grid_sizes.size(); ++g) {
    const Eigen::Index n = grid_sizes[g];
    Points nodes(n, 1);
    for (Eigen::Index j = 0; j < n; ++j) nodes(j, 0) = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    const GPPosterior post = condition(GPPrior{kernel, {}}, Dataset{nodes, Vector::Zero(n)}, 0.0);
    ContractionGrid& cell = report.grids[g];
    cell.n = n;
    cell.posterior_variance = post.variance(xq);
    cell.fill_distance = fill_distance(box, nodes, xq, config.rho, config.resolution);
  }

  std::vector<double> lh, lk;
  for (const ContractionGrid& c : report.grids) {
    lh.push_back(std::log(c.fill_distance));
    lk.push_back(std::log(c.posterior_variance));
  }
  report.fitted_slope = fit_slope(lh, lk);
  return report;
}

}  // namespace kgp
