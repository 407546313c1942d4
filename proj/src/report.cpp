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

#include "kgp/report.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

namespace kgp {

CaseResult make_case(std::string case_id, std::string digest, double lhs, double rhs, double gap,
                     double tolerance) {
  CaseResult c;
  c.case_id = std::move(case_id);
  c.inputs_digest = std::move(digest);
  c.lhs = lhs;
  c.rhs = rhs;
  c.gap = gap;
  c.tolerance = tolerance;
  c.passed = gap <= tolerance;
  return c;
}

bool Report::all_passed() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.passed; });
}

void Report::normalise() {
  std::sort(cases.begin(), cases.end(),
            [](const CaseResult& a, const CaseResult& b) { return a.case_id < b.case_id; });
}

nlohmann::json to_json(const Report& report) {
  nlohmann::json cases = nlohmann::json::array();
  for (const CaseResult& c : report.cases) {
    nlohmann::json j = {{"case_id", c.case_id}, {"inputs_digest", c.inputs_digest},
                        {"lhs", c.lhs},         {"rhs", c.rhs},
                        {"gap", c.gap},         {"tolerance", c.tolerance},
                        {"passed", c.passed}};
    if (!c.error.empty()) j["error"] = c.error;
    cases.push_back(std::move(j));
  }
  std::int64_t failed = 0;
  for (const CaseResult& c : report.cases) failed += c.passed ? 0 : 1;
  return {{"schema", kReportSchema},
          {"suite", report.suite},
          {"seed", report.seed},
          {"trials", report.trials},
          {"cases", std::move(cases)},
          {"passed", report.all_passed()},
          {"failed", failed},
          {"wall_time", report.wall_time}};
}

namespace {

void write(const nlohmann::json& v, int indent, int depth, std::string& out) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write(e, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double x = v.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& value, int indent) {
  std::string out;
  write(value, indent, 0, out);
  out += '\n';
  return out;
}

void Digest::bytes(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    state_ ^= p[i];
    state_ *= 0x100000001b3ULL;
  }
}

Digest& Digest::add(std::string_view text) {
  add(static_cast<std::int64_t>(text.size()));
  bytes(text.data(), text.size());
  return *this;
}

Digest& Digest::add(double value) {
  const std::uint64_t b = std::bit_cast<std::uint64_t>(value);
  bytes(&b, sizeof b);
  return *this;
}

Digest& Digest::add(std::int64_t value) {
  bytes(&value, sizeof value);
  return *this;
}

Digest& Digest::add(const Matrix& value) {
  add(static_cast<std::int64_t>(value.rows()));
  add(static_cast<std::int64_t>(value.cols()));
  for (Eigen::Index i = 0; i < value.rows(); ++i)
    for (Eigen::Index j = 0; j < value.cols(); ++j) add(value(i, j));
  return *this;
}

Digest& Digest::add(const Vector& value) {
  add(static_cast<std::int64_t>(value.size()));
  for (Eigen::Index i = 0; i < value.size(); ++i) add(value[i]);
  return *this;
}

std::string Digest::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
  return buf;
}

}  // namespace kgp
