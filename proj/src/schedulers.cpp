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

#include "cohmesh/schedulers.hpp"

#include <algorithm>
#include <array>

#include "cohmesh/error.hpp"
#include "cohmesh/hex.hpp"

namespace cohmesh {

std::vector<Statement> mine_regular_statements(const SparseMatrix& matrix, std::uint32_t max_width) {
  if (max_width == 0) throw Error("max_width must be at least 1");
  std::vector<Statement> out;
  const auto& e = matrix.entries;
  std::size_t i = 0;
  while (i < e.size()) {
    // Extend a run while the next nonzero is in the same row, one column on.
    std::size_t end = i + 1;
    while (end < e.size() && e[end].row == e[i].row && e[end].col == e[end - 1].col + 1) ++end;
    for (std::size_t start = i; start < end; start += max_width) {
      const auto w = static_cast<std::uint32_t>(std::min<std::size_t>(max_width, end - start));
      out.push_back({e[start].row, start, e[start].col, w});
    }
    i = end;
  }
  return out;
}

std::vector<Statement> dense_line_statements(std::uint32_t n_rows, std::uint32_t n_cols, std::uint32_t elem_bytes) {
  if (elem_bytes == 0 || kLineBytes % elem_bytes != 0) throw Error("element size must divide 64");
  const auto per_line = static_cast<std::uint32_t>(kLineBytes / elem_bytes);
  if (n_cols % per_line != 0) throw Error("dense rows must be a whole number of cache lines");
  std::vector<Statement> out;
  out.reserve(static_cast<std::size_t>(n_rows) * (n_cols / per_line));
  for (std::uint32_t r = 0; r < n_rows; ++r) {
    for (std::uint32_t c = 0; c < n_cols; c += per_line) {
      out.push_back({r, std::uint64_t{r} * n_cols + c, c, per_line});
    }
  }
  return out;
}

Schedule sequential_block_schedule(std::span<const Statement> statements, std::uint32_t n_rows,
                                   std::span<const TileCoord> tiles) {
  if (tiles.empty()) throw Error("no active tiles to schedule on");
  if (n_rows == 0) throw Error("sequential schedule needs at least one row");
  const std::uint64_t block = (std::uint64_t{n_rows} + tiles.size() - 1) / tiles.size();
  Schedule sched;
  for (auto t : tiles) sched.tiles.push_back({t, {}, 0});
  for (const auto& s : statements) {
    if (s.row >= n_rows) throw Error("statement row " + std::to_string(s.row) + " beyond n_rows");
    sched.tiles[s.row / block].push(s);
  }
  return sched;
}

Schedule subnuma_schedule(PhysAddr matrix_base, std::uint32_t n_rows, std::uint32_t n_cols, std::uint32_t elem_bytes,
                          std::span<const ActiveTile> tiles, const XorMaskSet& map) {
  if (elem_bytes == 0 || kLineBytes % elem_bytes != 0) throw Error("element size must divide 64");
  const std::uint64_t bytes = std::uint64_t{n_rows} * n_cols * elem_bytes;
  if (matrix_base % kGroupBytes != 0 || bytes % kGroupBytes != 0) {
    throw Error("sub-NUMA walk needs a matrix that starts and ends on 256 B boundaries");
  }
  if ((std::uint64_t{n_cols} * elem_bytes) % kLineBytes != 0) {
    throw Error("sub-NUMA schedule needs rows that are a whole number of cache lines");
  }
  const auto per_line = static_cast<std::uint32_t>(kLineBytes / elem_bytes);

  std::array<std::vector<std::size_t>, kNumQuadrants> members;
  for (std::size_t i = 0; i < tiles.size(); ++i) members[tiles[i].quadrant.id].push_back(i);
  for (std::size_t q = 0; q < kNumQuadrants; ++q) {
    if (members[q].empty()) throw Error("quadrant " + std::to_string(q) + " has no tile to run its lines");
  }

  Schedule sched;
  for (const auto& t : tiles) sched.tiles.push_back({t.coord, {}, 0});
  for (std::uint8_t q = 0; q < kNumQuadrants; ++q) {
    const WalkResult walk = quadrant_walk(matrix_base, bytes, Quadrant{q}, map);
    const std::size_t n = walk.lines.size();
    const std::size_t k = members[q].size();
    for (std::size_t m = 0; m < k; ++m) {
      auto& work = sched.tiles[members[q][m]];
      for (std::size_t li = m * n / k; li < (m + 1) * n / k; ++li) {
        const std::uint64_t elem = (walk.lines[li] - matrix_base) / elem_bytes;
        const auto row = static_cast<std::uint32_t>(elem / n_cols);
        const auto col = static_cast<std::uint32_t>(elem % n_cols);
        work.push({row, elem, col, per_line});
      }
    }
  }
  return sched;
}

std::vector<TileCoord> tile_visit_order(const MeshConfig& mesh) {
  if (mesh.tiles.empty()) throw Error("mesh has no active tiles");
  std::vector<std::pair<Cycles, TileCoord>> keyed;
  for (const auto& t : mesh.tiles) keyed.emplace_back(worst_case_trip(t.coord, mesh), t.coord);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (a.second.row != b.second.row) return a.second.row < b.second.row;
    return a.second.col < b.second.col;
  });
  std::vector<TileCoord> out;
  out.reserve(keyed.size());
  for (const auto& k : keyed) out.push_back(k.second);
  return out;
}

}  // namespace cohmesh
