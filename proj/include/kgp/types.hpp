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

#include <Eigen/Dense>

#include <optional>

namespace kgp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Point sets are stored one point per row: n x d.
using Points = Eigen::MatrixXd;

/// Input locations with optional outputs.
struct Dataset {
  Points X;
  std::optional<Vector> Y;

  Eigen::Index size() const { return X.rows(); }
  Eigen::Index dim() const { return X.cols(); }
  bool has_outputs() const { return Y.has_value(); }
};

/// Throws InputError unless every entry is finite, d >= 1 and the outputs
/// (if any) match the row count.
void validate(const Dataset& data);

}  // namespace kgp
