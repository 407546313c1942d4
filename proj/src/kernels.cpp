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

#include "kgp/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <vector>

#include "kgp/errors.hpp"

namespace kgp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Shortest text that parses back to the same double.
std::string format_number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

bool bitwise_equal(PointRef x, PointRef y) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(x[i]) != std::bit_cast<std::uint64_t>(y[i])) return false;
  }
  return true;
}

double distance(PointRef x, PointRef y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double t = x[i] - y[i];
    s += t * t;
  }
  return std::sqrt(s);
}

double matern_profile(double alpha, double h, double r) {
  if (alpha == 0.5) return std::exp(-r / h);
  if (alpha == 1.5) {
    const double s = std::sqrt(3.0) * r / h;
    return (1.0 + s) * std::exp(-s);
  }
  const double s = std::sqrt(5.0) * r / h;
  return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

void require_finite_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw InputError(std::string("kernel parameter ") + what + " must be finite and > 0");
  }
}

// --- parsing -------------------------------------------------------------

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InputError("kernel spec: bad number '" + std::string(text) + "' for " + std::string(what));
  }
  return v;
}

// Splits on `sep` at bracket depth zero.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '[') ++depth;
    if (s[i] == ']') --depth;
    if (depth < 0) throw InputError("kernel spec: unbalanced brackets in '" + std::string(s) + "'");
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw InputError("kernel spec: unbalanced brackets in '" + std::string(s) + "'");
  out.push_back(trim(s.substr(start)));
  return out;
}

std::map<std::string, double, std::less<>> parse_params(std::string_view body,
                                                         std::string_view family) {
  std::map<std::string, double, std::less<>> params;
  if (trim(body).empty()) return params;
  for (auto item : split_top(body, ',')) {
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("kernel spec: expected param=value in '" + std::string(item) + "'");
    }
    auto key = std::string(trim(item.substr(0, eq)));
    if (params.count(key)) throw InputError("kernel spec: duplicate parameter " + key);
    params[key] = parse_double(item.substr(eq + 1), key);
  }
  (void)family;
  return params;
}

double take(std::map<std::string, double, std::less<>>& params, std::string_view key,
            std::string_view family) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw InputError("kernel spec: " + std::string(family) + " needs parameter " +
                     std::string(key));
  }
  double v = it->second;
  params.erase(it);
  return v;
}

void expect_empty(const std::map<std::string, double, std::less<>>& params,
                  std::string_view family) {
  if (!params.empty()) {
    throw InputError("kernel spec: unknown parameter '" + params.begin()->first + "' for " +
                     std::string(family));
  }
}

}  // namespace

// --- construction ----------------------------------------------------------

Kernel Kernel::square_exponential(double gamma) {
  require_finite_positive(gamma, "gamma");
  return Kernel(SquareExponential{gamma});
}

Kernel Kernel::matern(double alpha, double h) {
  if (alpha != 0.5 && alpha != 1.5 && alpha != 2.5) {
    throw InputError("Matern kernel: alpha must be one of 0.5, 1.5, 2.5");
  }
  require_finite_positive(h, "h");
  return Kernel(Matern{alpha, h});
}

Kernel Kernel::polynomial(int degree, double c) {
  if (degree < 1) throw InputError("polynomial kernel: degree must be >= 1");
  if (!std::isfinite(c) || c < 0.0) throw InputError("polynomial kernel: c must be >= 0");
  return Kernel(Polynomial{degree, c});
}

Kernel Kernel::kronecker_delta(double scale) {
  if (!std::isfinite(scale) || scale < 0.0) {
    throw InputError("Kronecker delta kernel: scale must be >= 0");
  }
  return Kernel(KroneckerDelta{scale});
}

Kernel Kernel::brownian_distance() { return Kernel(BrownianDistance{}); }

Kernel Kernel::sum(Kernel left, Kernel right) {
  return Kernel(Sum{std::make_shared<const Kernel>(std::move(left)),
                    std::make_shared<const Kernel>(std::move(right))});
}

Kernel Kernel::product(Kernel left, Kernel right) {
  return Kernel(Product{std::make_shared<const Kernel>(std::move(left)),
                        std::make_shared<const Kernel>(std::move(right)), 0});
}

Kernel Kernel::tensor(Kernel left, Kernel right, Eigen::Index split) {
  if (split < 1) throw InputError("tensor product kernel: split must be >= 1");
  return Kernel(Product{std::make_shared<const Kernel>(std::move(left)),
                        std::make_shared<const Kernel>(std::move(right)), split});
}

Kernel Kernel::scaled(Kernel base, double factor) {
  require_finite_positive(factor, "factor");
  return Kernel(Scaled{std::make_shared<const Kernel>(std::move(base)), factor});
}

// --- evaluation ------------------------------------------------------------

void check_input_dimension(const Kernel& k, Eigen::Index d) {
  std::visit(overloaded{
                 [&](const Kernel::Sum& p) {
                   check_input_dimension(*p.left, d);
                   check_input_dimension(*p.right, d);
                 },
                 [&](const Kernel::Product& p) {
                   if (p.split == 0) {
                     check_input_dimension(*p.left, d);
                     check_input_dimension(*p.right, d);
                     return;
                   }
                   if (p.split >= d) {
                     throw InputError("tensor product kernel: split " + std::to_string(p.split) +
                                      " needs inputs of dimension > split, got " +
                                      std::to_string(d));
                   }
                   check_input_dimension(*p.left, p.split);
                   check_input_dimension(*p.right, d - p.split);
                 },
                 [&](const Kernel::Scaled& p) { check_input_dimension(*p.base, d); },
                 [](const auto&) {},
             },
             k.family());
}

double Kernel::eval_unchecked(PointRef x, PointRef y) const {
  return std::visit(
      overloaded{
          [&](const SquareExponential& p) {
            const double r = distance(x, y);
            return std::exp(-(r * r) / (p.gamma * p.gamma));
          },
          [&](const Matern& p) { return matern_profile(p.alpha, p.h, distance(x, y)); },
          [&](const Polynomial& p) { return std::pow(x.dot(y) + p.c, p.degree); },
          [&](const KroneckerDelta& p) { return bitwise_equal(x, y) ? p.scale : 0.0; },
          [&](const BrownianDistance&) { return x.norm() + y.norm() - distance(x, y); },
          [&](const Sum& p) { return p.left->eval_unchecked(x, y) + p.right->eval_unchecked(x, y); },
          [&](const Product& p) {
            if (p.split == 0) return p.left->eval_unchecked(x, y) * p.right->eval_unchecked(x, y);
            const Eigen::Index rest = x.size() - p.split;
            return p.left->eval_unchecked(x.head(p.split), y.head(p.split)) *
                   p.right->eval_unchecked(x.tail(rest), y.tail(rest));
          },
          [&](const Scaled& p) { return p.factor * p.base->eval_unchecked(x, y); },
      },
      family_);
}

double Kernel::operator()(PointRef x, PointRef y) const {
  if (x.size() != y.size()) {
    throw InputError("kernel evaluation: dimension mismatch (" + std::to_string(x.size()) +
                     " vs " + std::to_string(y.size()) + ")");
  }
  if (!x.allFinite() || !y.allFinite()) throw InputError("kernel evaluation: non-finite input");
  check_input_dimension(*this, x.size());
  return eval_unchecked(x, y);
}

bool Kernel::is_shift_invariant() const {
  return std::holds_alternative<SquareExponential>(family_) ||
         std::holds_alternative<Matern>(family_);
}

// --- text form ---------------------------------------------------------------

std::string Kernel::to_string() const {
  return std::visit(
      overloaded{
          [](const SquareExponential& p) { return "se:gamma=" + format_number(p.gamma); },
          [](const Matern& p) {
            return "matern:alpha=" + format_number(p.alpha) + ",h=" + format_number(p.h);
          },
          [](const Polynomial& p) {
            return "poly:m=" + std::to_string(p.degree) + ",c=" + format_number(p.c);
          },
          [](const KroneckerDelta& p) { return "delta:sigma2=" + format_number(p.scale); },
          [](const BrownianDistance&) { return std::string("brownian"); },
          [](const Sum& p) {
            return "sum[" + p.left->to_string() + ";" + p.right->to_string() + "]";
          },
          [](const Product& p) {
            std::string s = "product[" + p.left->to_string() + ";" + p.right->to_string();
            if (p.split != 0) s += ";split=" + std::to_string(p.split);
            return s + "]";
          },
          [](const Scaled& p) {
            return "scaled[" + p.base->to_string() + ";factor=" + format_number(p.factor) + "]";
          },
      },
      family_);
}

Kernel Kernel::parse(std::string_view spec) {
  spec = trim(spec);
  if (spec.empty()) throw InputError("kernel spec: empty");

  const auto bracket = spec.find('[');
  const auto colon = spec.find(':');
  if (bracket != std::string_view::npos && (colon == std::string_view::npos || bracket < colon)) {
    if (spec.back() != ']') throw InputError("kernel spec: missing ']' in '" + std::string(spec) + "'");
    const auto name = trim(spec.substr(0, bracket));
    const auto parts = split_top(spec.substr(bracket + 1, spec.size() - bracket - 2), ';');
    if (name == "sum") {
      if (parts.size() != 2) throw InputError("kernel spec: sum[] takes two kernels");
      return sum(parse(parts[0]), parse(parts[1]));
    }
    if (name == "product") {
      if (parts.size() == 2) return product(parse(parts[0]), parse(parts[1]));
      if (parts.size() == 3 && parts[2].starts_with("split=")) {
        const double split = parse_double(parts[2].substr(6), "split");
        if (split != std::floor(split) || split < 1) {
          throw InputError("kernel spec: split must be a positive integer");
        }
        return tensor(parse(parts[0]), parse(parts[1]), static_cast<Eigen::Index>(split));
      }
      throw InputError("kernel spec: product[] takes two kernels and an optional split=p");
    }
    if (name == "scaled") {
      if (parts.size() != 2 || !parts[1].starts_with("factor=")) {
        throw InputError("kernel spec: scaled[] takes a kernel and factor=c");
      }
      return scaled(parse(parts[0]), parse_double(parts[1].substr(7), "factor"));
    }
    throw InputError("kernel spec: unknown composite '" + std::string(name) + "'");
  }

  const auto name = trim(spec.substr(0, colon));
  auto params = parse_params(colon == std::string_view::npos ? std::string_view{}
                                                             : spec.substr(colon + 1),
                             name);
  if (name == "se") {
    const double gamma = take(params, "gamma", name);
    expect_empty(params, name);
    return square_exponential(gamma);
  }
  if (name == "matern") {
    const double alpha = take(params, "alpha", name);
    const double h = take(params, "h", name);
    expect_empty(params, name);
    return matern(alpha, h);
  }
  if (name == "poly") {
    const double m = take(params, "m", name);
    const double c = params.count("c") ? take(params, "c", name) : 0.0;
    expect_empty(params, name);
    if (m != std::floor(m) || m < 1 || m > 64) throw InputError("kernel spec: poly degree m must be an integer in [1, 64]");
    return polynomial(static_cast<int>(m), c);
  }
  if (name == "delta") {
    const double s = params.count("sigma2") ? take(params, "sigma2", name) : 1.0;
    expect_empty(params, name);
    return kronecker_delta(s);
  }
  if (name == "brownian") {
    expect_empty(params, name);
    return brownian_distance();
  }
  throw InputError("kernel spec: unknown family '" + std::string(name) + "'");
}

// --- Gram matrices -------------------------------------------------------------

namespace {

void check_points(const Points& A, const char* what) {
  if (!A.allFinite()) throw InputError(std::string(what) + ": non-finite coordinates");
}

void check_split(const Kernel& k, Eigen::Index d) { check_input_dimension(k, d); }

}  // namespace

Matrix gram(const Kernel& k, const Points& A, const Points& B) {
  if (A.cols() != B.cols() && A.rows() > 0 && B.rows() > 0) {
    throw InputError("gram: point sets have different dimensions");
  }
  check_points(A, "gram");
  check_points(B, "gram");
  check_split(k, A.cols());
  // Column-major copies so every point is contiguous.
  const Matrix At = A.transpose();
  const Matrix Bt = B.transpose();
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.rows();
  Matrix K(n, m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) K(i, j) = k.eval_unchecked(At.col(i), Bt.col(j));
  }
  return K;
}

Matrix gram(const Kernel& k, const Points& A) {
  check_points(A, "gram");
  check_split(k, A.cols());
  const Matrix At = A.transpose();
  const Eigen::Index n = A.rows();
  Matrix K(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) K(i, j) = k.eval_unchecked(At.col(i), At.col(j));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) K(i, j) = K(j, i);
  }
  return K;
}

Vector gram_column(const Kernel& k, const Points& X, PointRef x) {
  if (X.rows() > 0 && X.cols() != x.size()) throw InputError("gram_column: dimension mismatch");
  check_points(X, "gram_column");
  if (!x.allFinite()) throw InputError("gram_column: non-finite query point");
  check_split(k, x.size());
  Vector out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = k.eval_unchecked(X.row(i).transpose(), x);
  return out;
}

// --- spectral densities ------------------------------------------------------------

double spectral_density(const Kernel& k, PointRef omega) {
  if (!omega.allFinite()) throw InputError("spectral_density: non-finite frequency");
  const double d = static_cast<double>(omega.size());
  const double w2 = omega.squaredNorm();
  if (const auto* se = std::get_if<Kernel::SquareExponential>(&k.family())) {
    const double g = se->gamma;
    return std::pow(g / std::numbers::sqrt2, d) * std::exp(-g * g * w2 / 4.0);
  }
  if (const auto* m = std::get_if<Kernel::Matern>(&k.family())) {
    const double a = m->alpha;
    const double h = m->h;
    const double pi = std::numbers::pi;
    const double log_c = d * std::log(2.0) + 0.5 * d * std::log(pi) + std::lgamma(a + d / 2.0) +
                         a * std::log(2.0 * a) - std::lgamma(a) - 2.0 * a * std::log(h);
    return std::exp(log_c - (a + d / 2.0) * std::log(2.0 * a / (h * h) + 4.0 * pi * pi * w2));
  }
  throw UnsupportedOperation("spectral_density: only square-exponential and Matern kernels are shift-invariant with a closed-form density (got " +
                             k.to_string() + ")");
}

PsdCheck check_psd(const Matrix& K) {
  PsdCheck out{0.0, 0.0, 0.0, true, true};
  if (K.rows() != K.cols()) throw InputError("check_psd: matrix is not square");
  if (K.size() == 0) return out;
  const double scale = K.cwiseAbs().maxCoeff();
  const double asym = (K - K.transpose()).cwiseAbs().maxCoeff();
  out.asymmetry = scale > 0 ? asym / scale : asym;
  out.symmetric = out.asymmetry <= 1e-12;
  const Matrix S = 0.5 * (K + K.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.max_eigenvalue = es.eigenvalues().maxCoeff();
  out.psd = out.min_eigenvalue >= -1e-8 * std::max(out.max_eigenvalue, 0.0);
  return out;
}

void validate(const Dataset& data) {
  if (data.X.cols() < 1) throw InputError("dataset: input dimension must be >= 1");
  if (!data.X.allFinite()) throw InputError("dataset: non-finite input coordinates");
  if (data.Y) {
    if (data.Y->size() != data.X.rows()) throw InputError("dataset: outputs do not match inputs");
    if (!data.Y->allFinite()) throw InputError("dataset: non-finite outputs");
  }
}

}  // namespace kgp
