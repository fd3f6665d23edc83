/*
 * Copyright 2026 The cohmesh Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cohmesh {

struct Triple {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Coordinate-format sparse matrix, nonzeros sorted row-major, no duplicates.
/// The position of a nonzero in `entries` is its offset in A's value stream.
struct SparseMatrix {
  std::uint32_t n_rows = 0;
  std::uint32_t n_cols = 0;
  std::vector<Triple> entries;

  std::size_t nnz() const { return entries.size(); }
};

/// Sorts, checks bounds and rejects duplicate coordinates.
SparseMatrix make_sparse(std::uint32_t n_rows, std::uint32_t n_cols, std::vector<Triple> entries);

/// Matrix Market "coordinate" files: real, integer or pattern fields;
/// general, symmetric or skew-symmetric storage. Pattern entries get value
/// 1.0 and symmetric storage is expanded. Errors carry line numbers.
SparseMatrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
SparseMatrix load_matrix_market(const std::filesystem::path& path);

}  // namespace cohmesh
