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

#include "kgp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "kgp/errors.hpp"

namespace kgp {

namespace {

std::string trim(std::string s) {
  const auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && issp(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

[[noreturn]] void fail(const std::string& name, std::size_t line, const std::string& what) {
  throw ParseError(name + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& cell, const std::string& name, std::size_t line) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last) fail(name, line, "not a number: '" + cell + "'");
  if (!std::isfinite(v)) fail(name, line, "non-finite value: '" + cell + "'");
  return v;
}

// Number of leading x1..xd columns, checked against the names.
Eigen::Index input_columns(const CsvTable& t, const std::string& path, std::size_t extra_allowed,
                           const char* extra) {
  Eigen::Index d = 0;
  while (static_cast<std::size_t>(d) < t.header.size() && t.header[static_cast<std::size_t>(d)] == "x" + std::to_string(d + 1)) ++d;
  const std::size_t rest = t.header.size() - static_cast<std::size_t>(d);
  if (rest > extra_allowed || (rest == 1 && t.header.back() != extra)) {
    fail(path, 1, "expected header x1,...,xd" + std::string(extra_allowed ? std::string(",") + extra : ""));
  }
  return d;
}

}  // namespace

CsvTable parse_csv(std::istream& in, const std::string& name) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (t.header.empty()) {
      t.header = split(line);
      for (const auto& h : t.header) {
        if (h.empty()) fail(name, lineno, "empty column name in header");
      }
      continue;
    }
    const std::vector<std::string> cells = split(line);
    if (cells.size() != t.header.size()) {
      fail(name, lineno, "expected " + std::to_string(t.header.size()) + " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_number(c, name, lineno));
    rows.push_back(std::move(row));
  }
  t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_csv(in, path);
}

Dataset read_dataset(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header.empty()) return Dataset{Points(0, 0), Vector(0)};
  const Eigen::Index d = input_columns(t, path, 1, "y");
  Dataset data{t.values.leftCols(d), std::nullopt};
  if (t.values.cols() > d) data.Y = t.values.col(d);
  return data;
}

Points read_points(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header.empty()) return Points(0, 0);
  const Eigen::Index d = input_columns(t, path, 1, "y");
  return t.values.leftCols(d);
}

DiscreteMeasure read_measure(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header.empty()) fail(path, 1, "empty file; expected header x1,...,xd,w");
  const Eigen::Index d = input_columns(t, path, 1, "w");
  if (t.values.cols() == d) fail(path, 1, "missing weight column w");
  return DiscreteMeasure{t.values.leftCols(d), t.values.col(d)};
}

}  // namespace kgp
