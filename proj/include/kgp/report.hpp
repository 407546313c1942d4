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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kgp/types.hpp"

namespace kgp {

inline constexpr int kReportSchema = 1;

/// One checked identity: passed iff gap <= tolerance. `error` is set when the
/// case threw instead of producing numbers (then lhs, rhs and gap are NaN).
struct CaseResult {
  std::string case_id;
  std::string inputs_digest;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string error;
};

CaseResult make_case(std::string case_id, std::string digest, double lhs, double rhs, double gap,
                     double tolerance);

struct Report {
  std::string suite;
  std::vector<CaseResult> cases;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  double wall_time = 0.0;

  bool all_passed() const;
  /// Sorts cases by case_id.
  void normalise();
};

nlohmann::json to_json(const Report& report);

/// Serialises with every floating-point number at 17 significant digits
/// (NaN and infinities become null) and keys in sorted order.
std::string dump_json(const nlohmann::json& value, int indent = 2);

/// FNV-1a (64-bit) over the exact bits of the inputs of a case.
class Digest {
 public:
  Digest& add(std::string_view text);
  Digest& add(double value);
  Digest& add(std::int64_t value);
  Digest& add(const Matrix& value);
  Digest& add(const Vector& value);
  std::string hex() const;

 private:
  void bytes(const void* data, std::size_t size);
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace kgp
