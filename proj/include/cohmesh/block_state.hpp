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

#include <optional>
#include <unordered_map>
#include <vector>

#include "cohmesh/address_mapping.hpp"
#include "cohmesh/layout.hpp"
#include "cohmesh/mesh.hpp"
#include "cohmesh/statement.hpp"

namespace cohmesh {

struct BlockState {
  PhysAddr block = 0;
  std::optional<TileCoord> forwarder;  // tile whose L2 holds the line, if any
  DirectoryHome directory;
};

/// Tile that ships the data: the forwarder, or the memory controller of the
/// directory's quadrant for a cold line.
TileCoord data_tile(const BlockState& bs, const MeshConfig& mesh);

/// Scheduling cost of one line from requestor t: latency of the source plus
/// the rectangle overhead.
Cycles block_access_cost(TileCoord t, const BlockState& bs, const MeshConfig& mesh);

/// Lazily populated per-line coherence state under the single-forwarder,
/// unbounded-cache model. Owned by one scheduling or simulation run.
class BlockStateTable {
 public:
  BlockStateTable(const XorMaskSet& map, const MeshConfig& mesh) : map_(map), mesh_(mesh) {}

  const BlockState& get(PhysAddr line);
  void set_forwarder(PhysAddr line, TileCoord tile);
  std::size_t size() const { return states_.size(); }

 private:
  const XorMaskSet& map_;
  const MeshConfig& mesh_;
  std::unordered_map<PhysAddr, BlockState> states_;
};

/// Sum of block_access_cost over the distinct lines the statement reads.
Cycles statement_cost(const Statement& s, TileCoord t, BlockStateTable& states, const BlockLayout& layout,
                      const MeshConfig& mesh);

}  // namespace cohmesh
