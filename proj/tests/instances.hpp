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

// Seeded random problem instances shared by the unit and acceptance suites.

#include <algorithm>
#include <array>
#include <random>
#include <vector>

#include "cohmesh/address_mapping.hpp"
#include "cohmesh/hugepages.hpp"
#include "cohmesh/layout.hpp"
#include "cohmesh/matrix_market.hpp"
#include "cohmesh/mesh.hpp"
#include "cohmesh/schedulers.hpp"

namespace instances {

struct GreedyInstance {
  cohmesh::MeshConfig mesh;
  cohmesh::XorMaskSet map = cohmesh::XorMaskSet::minimal_quadrant();
  cohmesh::BlockLayout layout;
  std::vector<cohmesh::Statement> statements;
};

/// Mesh with `active` tiles scattered over a grid, every quadrant populated
/// and CHA c placed on a tile of quadrant c & 3.
inline cohmesh::MeshConfig random_mesh(std::mt19937_64& rng, unsigned active, std::uint32_t& num_chas) {
  using namespace cohmesh;
  MeshConfig m;
  do {
    m.cols = 2 + static_cast<int>(rng() % 5);
    m.rows = 2 + static_cast<int>(rng() % 5);
  } while (static_cast<unsigned>(m.cols * m.rows) < active);
  std::vector<TileCoord> cells;
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) cells.push_back({c, r});
  for (std::size_t i = cells.size() - 1; i > 0; --i) std::swap(cells[i], cells[rng() % (i + 1)]);
  cells.resize(active);
  std::array<std::vector<TileCoord>, 4> by_q;
  for (unsigned i = 0; i < active; ++i) {
    const auto q = static_cast<std::uint8_t>(i < 4 ? i : rng() & 3u);
    m.tiles.push_back({cells[i], Quadrant{q}});
    by_q[q].push_back(cells[i]);
  }
  std::size_t per_q = by_q[0].size();
  for (const auto& v : by_q) per_q = std::min(per_q, v.size());
  num_chas = static_cast<std::uint32_t>(std::min<std::size_t>(16, 4 * per_q));
  for (std::uint32_t c = 0; c < num_chas; ++c) m.cha_placement.push_back(by_q[c & 3u][c >> 2]);
  for (unsigned q = 0; q < 4; ++q) m.memory_controller_tiles[q] = by_q[q].front();
  m.validate();
  return m;
}

inline cohmesh::SparseMatrix random_sparse(std::mt19937_64& rng, std::uint32_t rows, std::uint32_t cols, double density) {
  std::vector<cohmesh::Triple> e;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint32_t r = 0; r < rows; ++r)
    for (std::uint32_t c = 0; c < cols; ++c)
      if (u(rng) < density) e.push_back({r, c, 1.0});
  return cohmesh::make_sparse(rows, cols, std::move(e));
}

/// At most max_statements mined statements, 4..16 tiles.
inline GreedyInstance greedy_instance(std::uint64_t seed, std::size_t max_statements = 100) {
  using namespace cohmesh;
  std::mt19937_64 rng(seed);
  GreedyInstance inst;
  std::uint32_t num_chas = 0;
  inst.mesh = random_mesh(rng, 4 + static_cast<unsigned>(rng() % 13), num_chas);
  inst.map = XorMaskSet::random_quadrant_valid(rng(), 4, num_chas);

  const auto rows = static_cast<std::uint32_t>(8 + rng() % 40);
  const auto cols = static_cast<std::uint32_t>(16 + rng() % 64);
  const double density = 0.05 + 0.5 * static_cast<double>(rng() % 1000) / 1000.0;
  const auto matrix = random_sparse(rng, rows, cols, density);
  inst.statements = mine_regular_statements(matrix, 1 + static_cast<std::uint32_t>(rng() % 8));
  if (inst.statements.size() > max_statements) inst.statements.resize(max_statements);
  if (inst.statements.empty()) inst.statements.push_back({0, 0, 0, 1});

  const auto pool = emulate_hugepage_pool(rng(), 16);
  const std::array<PhysAddr, 1> page{pool.pages.front()};
  inst.layout = layout_matvec(rows, cols, std::max<std::size_t>(matrix.nnz(), 1), 8, page);
  return inst;
}

}  // namespace instances
