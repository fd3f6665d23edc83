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

#include "cohmesh/block_state.hpp"

namespace cohmesh {

TileCoord data_tile(const BlockState& bs, const MeshConfig& mesh) {
  return bs.forwarder ? *bs.forwarder : mesh.memory_controller_tiles[bs.directory.quadrant.id];
}

Cycles block_access_cost(TileCoord t, const BlockState& bs, const MeshConfig& mesh) {
  const Cycles lambda = bs.forwarder ? mesh.lambda_l2 : mesh.lambda_mcdram;
  return lambda + access_overhead(t, bs.directory.tile, data_tile(bs, mesh), mesh);
}

const BlockState& BlockStateTable::get(PhysAddr line) {
  line = line_base(line);
  auto it = states_.find(line);
  if (it == states_.end()) {
    BlockState bs;
    bs.block = line;
    bs.directory = resolve_directory(map_.raw_index(line), map_, mesh_);
    it = states_.emplace(line, bs).first;
  }
  return it->second;
}

void BlockStateTable::set_forwarder(PhysAddr line, TileCoord tile) {
  get(line);
  states_.at(line_base(line)).forwarder = tile;
}

Cycles statement_cost(const Statement& s, TileCoord t, BlockStateTable& states, const BlockLayout& layout,
                      const MeshConfig& mesh) {
  thread_local std::vector<OperandLine> lines;
  statement_lines(s, layout, lines);
  Cycles total = 0;
  for (const auto& ol : lines) total += block_access_cost(t, states.get(ol.line), mesh);
  return total;
}

}  // namespace cohmesh
