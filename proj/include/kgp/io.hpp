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

#include <iosfwd>
#include <string>
#include <vector>

#include "kgp/embeddings.hpp"
#include "kgp/types.hpp"

// CSV input: a header line then one numeric row per line, ',' separated, '.'
// decimals. Empty lines are skipped; a completely empty file is an empty
// table with no columns.

namespace kgp {

struct CsvTable {
  std::vector<std::string> header;
  Matrix values;
};

/// Throws ParseError ("path:line: message") on ragged rows and on cells that
/// are not finite decimal numbers.
CsvTable parse_csv(std::istream& in, const std::string& name);
CsvTable read_csv(const std::string& path);

/// Header x1,...,xd with an optional trailing y.
Dataset read_dataset(const std::string& path);
/// Header x1,...,xd (a trailing y column is ignored).
Points read_points(const std::string& path);
/// Header x1,...,xd,w.
DiscreteMeasure read_measure(const std::string& path);

}  // namespace kgp
