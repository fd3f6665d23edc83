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
#include <span>
#include <vector>

#include "cohmesh/address_mapping.hpp"
#include "cohmesh/layout.hpp"
#include "cohmesh/matrix_market.hpp"
#include "cohmesh/mesh.hpp"
#include "cohmesh/statement.hpp"

namespace cohmesh {

inline constexpr std::uint32_t kDefaultMaxWidth = 8;  // one 512-bit vector of doubles

/// Splits each row into maximal runs of consecutive columns, then chops runs
/// into chunks of at most max_width lanes. Row-major output.
std::vector<Statement> mine_regular_statements(const SparseMatrix& matrix, std::uint32_t max_width = kDefaultMaxWidth);

/// One statement per cache line of a dense row-major matrix. Rows must be a
/// whole number of lines.
std::vector<Statement> dense_line_statements(std::uint32_t n_rows, std::uint32_t n_cols, std::uint32_t elem_bytes);

/// Static block schedule: rows are cut into blocks of ceil(n_rows / tiles)
/// and handed to tiles in order; a statement follows its row.
Schedule sequential_block_schedule(std::span<const Statement> statements, std::uint32_t n_rows,
                                   std::span<const TileCoord> tiles);

/// Each tile gets only the matrix lines whose home CHA sits in its own
/// quadrant, found with the offset-window walk. A quadrant's lines are cut
/// into near-equal contiguous shares for its tiles, in tile order.
Schedule subnuma_schedule(PhysAddr matrix_base, std::uint32_t n_rows, std::uint32_t n_cols, std::uint32_t elem_bytes,
                          std::span<const ActiveTile> tiles, const XorMaskSet& map);

/// Active tiles by worst-case round trip, farthest first; ties by (row, col).
std::vector<TileCoord> tile_visit_order(const MeshConfig& mesh);

struct GreedyPick {
  TileCoord tile;
  std::size_t statement = 0;  // index into the input sequence
  Cycles cost = 0;
};

/// Coherence-aware greedy schedule. Tiles are visited in tile_visit_order;
/// each takes the cheapest remaining statement (lowest index on ties) until
/// its FLOP load reaches total / tiles. Line states follow every pick. The
/// last tile visited also absorbs whatever remains.
Schedule greedy_schedule(std::span<const Statement> statements, const BlockLayout& layout, const XorMaskSet& map,
                         const MeshConfig& mesh, std::vector<GreedyPick>* trace = nullptr);

}  // namespace cohmesh
