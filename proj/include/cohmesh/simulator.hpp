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
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cohmesh/address_mapping.hpp"
#include "cohmesh/layout.hpp"
#include "cohmesh/mesh.hpp"
#include "cohmesh/statement.hpp"

namespace cohmesh {

struct Traffic {
  std::uint64_t accesses = 0;
  std::uint64_t memory_accesses = 0;
  std::uint64_t far_queries = 0;       // requestor quadrant != directory quadrant
  std::uint64_t unmapped_queries = 0;  // directory index outside num_chas
  Cycles cycles = 0;

  Traffic& operator+=(const Traffic& o) {
    accesses += o.accesses;
    memory_accesses += o.memory_accesses;
    far_queries += o.far_queries;
    unmapped_queries += o.unmapped_queries;
    cycles += o.cycles;
    return *this;
  }
  friend bool operator==(const Traffic&, const Traffic&) = default;
};

struct TileCost {
  TileCoord tile;
  Quadrant quadrant;
  std::uint64_t statements = 0;
  Traffic traffic;
};

struct CostReport {
  std::vector<TileCost> per_tile;  // schedule order
  std::array<Traffic, kNumOperands> per_operand{};
  Traffic total;

  double mean_latency() const {
    return total.accesses == 0 ? 0.0 : static_cast<double>(total.cycles) / static_cast<double>(total.accesses);
  }
  double far_fraction(Operand op) const {
    const auto& t = per_operand[static_cast<std::size_t>(op)];
    return t.accesses == 0 ? 0.0 : static_cast<double>(t.far_queries) / static_cast<double>(t.accesses);
  }
};

/// Replays a schedule tile by tile against the coherence cost model. Each
/// line access pays block_access_cost plus, when the mesh asks for it, the
/// path inside the zero-overhead rectangle; the requestor then becomes the
/// line's forwarder.
CostReport simulate_schedule(const Schedule& schedule, const BlockLayout& layout, const XorMaskSet& map,
                             const MeshConfig& mesh);

/// One row per tile: tile_col,tile_row,quadrant,statements,accesses,cycles,
/// memory_accesses,far_queries,unmapped_queries.
void write_cost_report_csv(std::ostream& out, const CostReport& report);
void write_cost_summary(std::ostream& out, const CostReport& report);

}  // namespace cohmesh
