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

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "kgp/types.hpp"

namespace kgp {

/// A single point passed to a kernel. Accepts plain vectors as well as
/// transposed rows of a point set (`X.row(i).transpose()`).
using PointRef = Eigen::Ref<const Vector, 0, Eigen::InnerStride<>>;

/// Positive definite kernel descriptor.
///
/// Kernels are immutable values; composite kernels share their children.
/// Families:
///   - square exponential   exp(-|x-y|^2 / gamma^2)
///   - Matern, alpha in {1/2, 3/2, 5/2}, length-scale h (closed forms)
///   - polynomial           (<x,y> + c)^m
///   - Kronecker delta      scale * [x == y], coordinates compared bitwise
///   - Brownian distance    |x| + |y| - |x-y|
///   - sum, product, positive scaling of other kernels. A product with a
///     nonzero split acts on stacked inputs (x, y): the left factor sees the
///     first `split` coordinates, the right factor the rest (k (x) l).
class Kernel {
 public:
  struct SquareExponential {
    double gamma;
  };
  struct Matern {
    double alpha;  // 0.5, 1.5 or 2.5
    double h;
  };
  struct Polynomial {
    int degree;
    double c;
  };
  struct KroneckerDelta {
    double scale;
  };
  struct BrownianDistance {};
  struct Sum {
    std::shared_ptr<const Kernel> left;
    std::shared_ptr<const Kernel> right;
  };
  struct Product {
    std::shared_ptr<const Kernel> left;
    std::shared_ptr<const Kernel> right;
    Eigen::Index split;  // 0: both factors see the whole point
  };
  struct Scaled {
    std::shared_ptr<const Kernel> base;
    double factor;
  };

  using Family = std::variant<SquareExponential, Matern, Polynomial, KroneckerDelta,
                              BrownianDistance, Sum, Product, Scaled>;

  static Kernel square_exponential(double gamma);
  static Kernel matern(double alpha, double h);
  static Kernel polynomial(int degree, double c);
  static Kernel kronecker_delta(double scale = 1.0);
  static Kernel brownian_distance();
  static Kernel sum(Kernel left, Kernel right);
  static Kernel product(Kernel left, Kernel right);
  static Kernel tensor(Kernel left, Kernel right, Eigen::Index split);
  static Kernel scaled(Kernel base, double factor);

  /// Parses the flat text form, e.g. `matern:alpha=2.5,h=0.5` or
  /// `sum[se:gamma=1;delta:sigma2=0.1]`.
  static Kernel parse(std::string_view spec);

  /// Canonical text form; parse(to_string()) reproduces the kernel exactly.
  std::string to_string() const;

  const Family& family() const { return family_; }

  /// k(x, y). Throws InputError on dimension mismatch or non-finite input.
  double operator()(PointRef x, PointRef y) const;

  /// Same as operator() without argument checks. Callers guarantee
  /// matching dimensions and finite coordinates.
  double eval_unchecked(PointRef x, PointRef y) const;

  bool is_shift_invariant() const;

 private:
  explicit Kernel(Family f) : family_(std::move(f)) {}
  Family family_;
};

/// Throws InputError if a tensor-product split does not fit inputs of
/// dimension d.
void check_input_dimension(const Kernel& k, Eigen::Index d);

inline double eval(const Kernel& k, PointRef x, PointRef y) { return k(x, y); }

/// K_AB with entries k(a_i, b_j); parallel over rows of A.
Matrix gram(const Kernel& k, const Points& A, const Points& B);

/// K_AA. Only the upper triangle is evaluated, so the result is exactly
/// symmetric.
Matrix gram(const Kernel& k, const Points& A);

/// k_Xx = (k(x_1, x), ..., k(x_n, x)).
Vector gram_column(const Kernel& k, const Points& X, PointRef x);

/// Fourier transform of the shift-invariant profile at frequency omega.
///
/// Square exponential: (gamma/sqrt 2)^d exp(-gamma^2 |w|^2 / 4), the
/// unitary angular-frequency convention. Matern: C (2 alpha/h^2 +
/// 4 pi^2 |w|^2)^(-alpha - d/2) with the ordinary-frequency normalisation
/// C = 2^d pi^(d/2) Gamma(alpha + d/2) (2 alpha)^alpha / (Gamma(alpha) h^(2 alpha)),
/// so the density integrates to k(0) = 1.
double spectral_density(const Kernel& k, PointRef omega);

struct PsdCheck {
  double min_eigenvalue;
  double max_eigenvalue;
  double asymmetry;  // max |K_ij - K_ji| / max |K_ij|
  bool symmetric;
  bool psd;
};

/// Symmetry (1e-12 relative) and PSD (lambda_min >= -1e-8 lambda_max) check.
PsdCheck check_psd(const Matrix& K);

}  // namespace kgp
