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

#include "cohmesh/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cohmesh/error.hpp"

namespace cohmesh {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

enum class Field { kReal, kInteger, kPattern };
enum class Symmetry { kGeneral, kSymmetric, kSkew };

}  // namespace

SparseMatrix make_sparse(std::uint32_t n_rows, std::uint32_t n_cols, std::vector<Triple> entries) {
  for (const auto& t : entries) {
    if (t.row >= n_rows || t.col >= n_cols) {
      throw Error("entry (" + std::to_string(t.row) + "," + std::to_string(t.col) + ") outside " +
                  std::to_string(n_rows) + "x" + std::to_string(n_cols));
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triple& a, const Triple& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  auto dup = std::adjacent_find(entries.begin(), entries.end(),
                                [](const Triple& a, const Triple& b) { return a.row == b.row && a.col == b.col; });
  if (dup != entries.end()) {
    throw Error("duplicate entry (" + std::to_string(dup->row) + "," + std::to_string(dup->col) + ")");
  }
  return SparseMatrix{n_rows, n_cols, std::move(entries)};
}

SparseMatrix read_matrix_market(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw ParseError(source, 1, "empty file");
  ++lineno;
  std::istringstream banner(line);
  std::string tag, object, format, field_s, sym_s;
  banner >> tag >> object >> format >> field_s >> sym_s;
  if (tag != "%%MatrixMarket") throw ParseError(source, lineno, "missing %%MatrixMarket banner");
  if (lower(object) != "matrix") throw ParseError(source, lineno, "object '" + object + "' is not 'matrix'");
  if (lower(format) != "coordinate") throw ParseError(source, lineno, "only coordinate format is supported");

  Field field;
  field_s = lower(field_s);
  if (field_s == "real" || field_s == "double") field = Field::kReal;
  else if (field_s == "integer") field = Field::kInteger;
  else if (field_s == "pattern") field = Field::kPattern;
  else throw ParseError(source, lineno, "unsupported field '" + field_s + "'");

  Symmetry sym;
  sym_s = lower(sym_s);
  if (sym_s == "general") sym = Symmetry::kGeneral;
  else if (sym_s == "symmetric") sym = Symmetry::kSymmetric;
  else if (sym_s == "skew-symmetric") sym = Symmetry::kSkew;
  else throw ParseError(source, lineno, "unsupported symmetry '" + sym_s + "'");

  // Size line, after comments.
  long long rows = -1, cols = -1, declared = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    std::istringstream size(line);
    if (!(size >> rows >> cols >> declared) || rows < 0 || cols < 0 || declared < 0) {
      throw ParseError(source, lineno, "bad size line, expected 'rows cols nonzeros'");
    }
    break;
  }
  if (rows < 0) throw ParseError(source, lineno, "missing size line");
  if (rows > UINT32_MAX || cols > UINT32_MAX) throw ParseError(source, lineno, "dimensions too large");

  std::vector<Triple> entries;
  std::vector<std::size_t> origin;  // source line of each entry
  entries.reserve(static_cast<std::size_t>(declared) * (sym == Symmetry::kGeneral ? 1 : 2));
  long long seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    if (seen == declared) throw ParseError(source, lineno, "more entries than the declared " + std::to_string(declared));
    std::istringstream es(line);
    long long r = 0, c = 0;
    double v = 1.0;
    if (!(es >> r >> c)) throw ParseError(source, lineno, "expected 'row col" + std::string(field == Field::kPattern ? "'" : " value'"));
    if (field != Field::kPattern && !(es >> v)) throw ParseError(source, lineno, "missing value");
    if (r < 1 || r > rows || c < 1 || c > cols) {
      throw ParseError(source, lineno, "index (" + std::to_string(r) + "," + std::to_string(c) + ") out of range");
    }
    if (sym != Symmetry::kGeneral && c > r) {
      throw ParseError(source, lineno, "symmetric storage must list the lower triangle only");
    }
    if (sym == Symmetry::kSkew && r == c) throw ParseError(source, lineno, "skew-symmetric matrix with a diagonal entry");
    const auto ur = static_cast<std::uint32_t>(r - 1);
    const auto uc = static_cast<std::uint32_t>(c - 1);
    entries.push_back({ur, uc, v});
    origin.push_back(lineno);
    if (sym != Symmetry::kGeneral && ur != uc) {
      entries.push_back({uc, ur, sym == Symmetry::kSkew ? -v : v});
      origin.push_back(lineno);
    }
    ++seen;
  }
  if (seen != declared) {
    throw ParseError(source, lineno, "declared " + std::to_string(declared) + " entries, found " + std::to_string(seen));
  }
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = entries[a];
    const auto& y = entries[b];
    return x.row != y.row ? x.row < y.row : (x.col != y.col ? x.col < y.col : origin[a] < origin[b]);
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& a = entries[order[i - 1]];
    const auto& b = entries[order[i]];
    if (a.row == b.row && a.col == b.col) {
      throw ParseError(source, origin[order[i]],
                       "duplicate entry (" + std::to_string(b.row + 1) + "," + std::to_string(b.col + 1) +
                           "), first seen on line " + std::to_string(origin[order[i - 1]]));
    }
  }
  try {
    return make_sparse(static_cast<std::uint32_t>(rows), static_cast<std::uint32_t>(cols), std::move(entries));
  } catch (const Error& e) {
    throw ParseError(source, lineno, e.what());
  }
}

SparseMatrix load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_matrix_market(in, path.string());
}

}  // namespace cohmesh
