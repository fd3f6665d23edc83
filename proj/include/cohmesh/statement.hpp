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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cohmesh/layout.hpp"
#include "cohmesh/mesh.hpp"

namespace cohmesh {

/// y[row] += A[a_start : a_start + width) . x[x_start : x_start + width)
///
/// A regular run of one matrix row: no index arrays, only contiguous slices.
struct Statement {
  std::uint32_t row = 0;
  std::uint64_t a_start = 0;
  std::uint32_t x_start = 0;
  std::uint32_t width = 1;

  std::uint64_t flops() const { return 2ull * width; }

  friend bool operator==(const Statement&, const Statement&) = default;
};

/// "y[2] += A[5:9] * x[0:4]" with inclusive slice ends; width-1 runs print
/// as plain subscripts.
std::string to_string(const Statement& s);

struct TileWork {
  TileCoord tile;
  std::vector<Statement> statements;  // execution order
  std::uint64_t load_flops = 0;

  void push(const Statement& s) {
    statements.push_back(s);
    load_flops += s.flops();
  }
};

/// Assignment of statements to tiles. Tiles appear in the order the scheduler
/// filled them and each tile appears at most once.
struct Schedule {
  std::vector<TileWork> tiles;

  std::size_t num_statements() const;
  std::uint64_t total_flops() const;
  const TileWork* find(TileCoord t) const;
};

enum class Operand : std::uint8_t { kY = 0, kA = 1, kX = 2 };
inline constexpr std::size_t kNumOperands = 3;
const char* operand_name(Operand op);

struct OperandLine {
  Operand operand;
  PhysAddr line;
};

/// Distinct cache lines read by a statement, y first, then A, then x. The A
/// operand resolves to structure "A", or "B" for dense inputs.
void statement_lines(const Statement& s, const BlockLayout& layout, std::vector<OperandLine>& out);

}  // namespace cohmesh
