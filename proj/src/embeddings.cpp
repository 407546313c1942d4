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

#include "kgp/embeddings.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "kgp/errors.hpp"
#include "kgp/linalg.hpp"
#include "kgp/rng.hpp"

namespace kgp {

namespace {

std::vector<std::uint64_t> bits_of(PointRef x) {
  std::vector<std::uint64_t> key(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) key[static_cast<std::size_t>(i)] = std::bit_cast<std::uint64_t>(x[i]);
  return key;
}

double checked_sqrt(double q, double scale, const char* who) {
  if (q >= 0.0) return std::sqrt(q);
  if (q < -1e-10 * std::max(1.0, scale)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", q);
    throw NumericalError(std::string(who) + ": quadratic form is negative beyond roundoff: " + buf);
  }
  return 0.0;
}

}  // namespace

DiscreteMeasure DiscreteMeasure::uniform(Points atoms) {
  const Eigen::Index n = atoms.rows();
  if (n == 0) throw InputError("uniform measure needs at least one atom");
  return DiscreteMeasure{std::move(atoms), Vector::Constant(n, 1.0 / static_cast<double>(n))};
}

DiscreteMeasure DiscreteMeasure::point_mass(PointRef x) {
  return DiscreteMeasure{Points(x.transpose()), Vector::Ones(1)};
}

bool DiscreteMeasure::is_probability() const {
  return (weights.array() >= 0.0).all() && std::abs(weights.sum() - 1.0) <= 1e-10;
}

void validate(const DiscreteMeasure& m) {
  if (m.weights.size() != m.atoms.rows()) throw InputError("measure: weights do not match atoms");
  if (!m.atoms.allFinite()) throw InputError("measure: non-finite atoms");
  if (!m.weights.allFinite()) throw InputError("measure: non-finite weights");
}

KernelMean::KernelMean(Kernel kernel, DiscreteMeasure measure)
    : kernel_(std::move(kernel)), measure_(std::move(measure)) {
  validate(measure_);
}

double KernelMean::operator()(PointRef x) const {
  if (measure_.size() == 0) return 0.0;
  return gram_column(kernel_, measure_.atoms, x).dot(measure_.weights);
}

Vector KernelMean::at(const Points& X) const {
  if (measure_.size() == 0) return Vector::Zero(X.rows());
  return gram(kernel_, X, measure_.atoms) * measure_.weights;
}

double KernelMean::inner(const KernelMean& other) const {
  if (measure_.size() == 0 || other.measure_.size() == 0) return 0.0;
  return measure_.weights.dot(gram(kernel_, measure_.atoms, other.measure_.atoms) *
                              other.measure_.weights);
}

KernelMean mean_embed(const Kernel& kernel, const DiscreteMeasure& measure) {
  return KernelMean(kernel, measure);
}

SignedMeasure signed_difference(const DiscreteMeasure& P, const DiscreteMeasure& Q) {
  validate(P);
  validate(Q);
  if (P.size() > 0 && Q.size() > 0 && P.dim() != Q.dim()) {
    throw InputError("signed_difference: measures live in different dimensions");
  }
  const Eigen::Index d = P.size() > 0 ? P.dim() : Q.dim();
  // Atoms are ordered by their bits and the P and Q masses are summed apart,
  // so swapping P and Q negates the coefficients exactly.
  struct Mass {
    double p = 0.0;
    double q = 0.0;
  };
  std::map<std::vector<std::uint64_t>, Mass> merged;
  auto add = [&](const DiscreteMeasure& m, bool is_p) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      Mass& mass = merged[bits_of(m.atoms.row(i).transpose())];
      (is_p ? mass.p : mass.q) += m.weights[i];
    }
  };
  add(P, true);
  add(Q, false);
  const auto m = static_cast<Eigen::Index>(merged.size());
  SignedMeasure out{Points(m, d), Vector(m)};
  Eigen::Index j = 0;
  for (const auto& [key, mass] : merged) {
    for (Eigen::Index c = 0; c < d; ++c) out.atoms(j, c) = std::bit_cast<double>(key[static_cast<std::size_t>(c)]);
    out.coefficients[j++] = mass.p - mass.q;
  }
  return out;
}

double mmd(const Kernel& kernel, const DiscreteMeasure& P, const DiscreteMeasure& Q) {
  const SignedMeasure s = signed_difference(P, Q);
  if (s.atoms.rows() == 0) return 0.0;
  const Matrix K = gram(kernel, s.atoms);
  const double q = s.coefficients.dot(K * s.coefficients);
  const double scale = s.coefficients.cwiseAbs().dot(K.cwiseAbs() * s.coefficients.cwiseAbs());
  return checked_sqrt(q, scale, "mmd");
}

AverageCaseReport verify_average_case(const Kernel& kernel, const DiscreteMeasure& P,
                                      const DiscreteMeasure& Q, Eigen::Index draws,
                                      std::uint64_t seed) {
  if (draws < 2) throw InputError("verify_average_case: need at least 2 draws");
  AverageCaseReport r;
  r.draws = draws;

  // RKHS side: |mu_P - mu_Q|^2 through kernel-mean inner products.
  const KernelMean muP = mean_embed(kernel, P);
  const KernelMean muQ = mean_embed(kernel, Q);
  r.mmd2 = muP.inner(muP) - 2.0 * muP.inner(muQ) + muQ.inner(muQ);

  // GP side: Pf - Qf = c^T f_Z is Gaussian with variance c^T K_ZZ c.
  const SignedMeasure s = signed_difference(P, Q);
  if (s.atoms.rows() > 0) {
    const Matrix K = gram(kernel, s.atoms);
    r.gp_variance = s.coefficients.dot(K * s.coefficients);
  }
  r.gap = std::abs(r.mmd2 - r.gp_variance);

  if (s.atoms.rows() == 0 || (s.coefficients.array() == 0.0).all()) return r;
  // f_Z = B z with B B^T = K_ZZ.
  const Matrix B = psd_square_root(gram(kernel, s.atoms));
  const Vector b = B.transpose() * s.coefficients;
  const Matrix Z = standard_normal_columns(b.size(), draws, seed);
  const Vector sq = (Z.transpose() * b).array().square();
  const double n = static_cast<double>(draws);
  r.mc_estimate = sq.mean();
  const double var = (sq.array() - r.mc_estimate).square().sum() / (n - 1.0);
  r.mc_se = std::sqrt(var / n);
  return r;
}

KernelMean empirical_mean(const Kernel& kernel, const Points& sample) {
  return KernelMean(kernel, DiscreteMeasure::uniform(sample));
}

KernelMean skme(const Kernel& kernel, const Points& sample, double lambda) {
  if (!std::isfinite(lambda) || !(lambda > 0.0)) throw InputError("skme: lambda must be > 0");
  const Eigen::Index n = sample.rows();
  if (n == 0) throw InputError("skme: empty sample");
  const Matrix K = gram(kernel, sample);
  const Vector mu_hat = K * Vector::Constant(n, 1.0 / static_cast<double>(n));
  const Matrix A = with_diagonal(K, static_cast<double>(n) * lambda);
  const Vector w = refine(A, cholesky_strict(A, "K_XX + n lambda I"), mu_hat);
  return KernelMean(kernel, DiscreteMeasure{sample, w});
}

double skme_objective(const Kernel& kernel, const Points& sample, double lambda, const Vector& w) {
  const Eigen::Index n = sample.rows();
  const Matrix K = gram(kernel, sample);
  const Vector c = w - Vector::Constant(n, 1.0 / static_cast<double>(n));
  return c.dot(K * c) + static_cast<double>(n) * lambda * w.squaredNorm();
}

PosteriorMoments bayes_kmean_posterior(const Matrix& power_gram, const Vector& empirical_mean_at_x,
                                       double noise_variance, const Vector& query_row,
                                       double query_diagonal) {
  if (!std::isfinite(noise_variance) || !(noise_variance > 0.0)) {
    throw InputError("bayes_kmean_posterior: noise variance must be > 0");
  }
  const Eigen::Index n = power_gram.rows();
  if (power_gram.cols() != n || empirical_mean_at_x.size() != n || query_row.size() != n) {
    throw InputError("bayes_kmean_posterior: size mismatch");
  }
  const Matrix A = with_diagonal(power_gram, noise_variance);
  const Cholesky f = cholesky_strict(A, "K^theta + s2 I");
  PosteriorMoments out;
  out.mean = query_row.dot(refine(A, f, empirical_mean_at_x));
  out.variance = query_diagonal - f.half_solve(query_row).squaredNorm();
  return out;
}

Vector bayes_kmean_posterior_at_atoms(const Matrix& power_gram, const Vector& empirical_mean_at_x,
                                      double noise_variance) {
  if (!std::isfinite(noise_variance) || !(noise_variance > 0.0)) {
    throw InputError("bayes_kmean_posterior: noise variance must be > 0");
  }
  if (power_gram.rows() != power_gram.cols() || empirical_mean_at_x.size() != power_gram.rows()) {
    throw InputError("bayes_kmean_posterior: size mismatch");
  }
  const Matrix A = with_diagonal(power_gram, noise_variance);
  return power_gram * refine(A, cholesky_strict(A, "K^theta + s2 I"), empirical_mean_at_x);
}

}  // namespace kgp
