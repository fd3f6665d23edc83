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

#include "cohmesh/simulator.hpp"

#include <iomanip>
#include <ostream>

#include "cohmesh/block_state.hpp"
#include "cohmesh/error.hpp"

namespace cohmesh {

CostReport simulate_schedule(const Schedule& schedule, const BlockLayout& layout, const XorMaskSet& map,
                             const MeshConfig& mesh) {
  CostReport report;
  BlockStateTable states(map, mesh);
  std::vector<OperandLine> lines;

  for (const auto& work : schedule.tiles) {
    const ActiveTile* tile = mesh.find_active(work.tile);
    if (tile == nullptr) {
      throw Error("schedule assigns work to inactive tile (" + std::to_string(work.tile.col) + "," +
                  std::to_string(work.tile.row) + ")");
    }
    TileCost tc{work.tile, tile->quadrant, work.statements.size(), {}};
    for (const auto& s : work.statements) {
      statement_lines(s, layout, lines);
      for (const auto& ol : lines) {
        const BlockState& bs = states.get(ol.line);
        Traffic t;
        t.accesses = 1;
        t.cycles = block_access_cost(work.tile, bs, mesh);
        if (mesh.charge_rectangle_path) t.cycles += rectangle_path(bs.directory.tile, data_tile(bs, mesh), mesh);
        if (!bs.forwarder) t.memory_accesses = 1;
        if (bs.directory.quadrant != tile->quadrant) t.far_queries = 1;
        if (bs.directory.unmapped) t.unmapped_queries = 1;
        tc.traffic += t;
        report.per_operand[static_cast<std::size_t>(ol.operand)] += t;
        states.set_forwarder(ol.line, work.tile);
      }
    }
    report.total += tc.traffic;
    report.per_tile.push_back(tc);
  }
  return report;
}

void write_cost_report_csv(std::ostream& out, const CostReport& report) {
  out << "tile_col,tile_row,quadrant,statements,accesses,cycles,memory_accesses,far_queries,unmapped_queries\n";
  for (const auto& t : report.per_tile) {
    out << t.tile.col << ',' << t.tile.row << ',' << unsigned{t.quadrant.id} << ',' << t.statements << ','
        << t.traffic.accesses << ',' << t.traffic.cycles << ',' << t.traffic.memory_accesses << ','
        << t.traffic.far_queries << ',' << t.traffic.unmapped_queries << '\n';
  }
}

void write_cost_summary(std::ostream& out, const CostReport& report) {
  const auto& t = report.total;
  out << "tiles            " << report.per_tile.size() << '\n'
      << "accesses         " << t.accesses << '\n'
      << "cycles           " << t.cycles << '\n'
      << "mean latency     " << std::fixed << std::setprecision(2) << report.mean_latency() << '\n'
      << "memory accesses  " << t.memory_accesses << '\n'
      << "far queries      " << t.far_queries << '\n'
      << "unmapped queries " << t.unmapped_queries << '\n';
  for (std::size_t i = 0; i < kNumOperands; ++i) {
    const auto op = static_cast<Operand>(i);
    const auto& o = report.per_operand[i];
    out << "operand " << operand_name(op) << ": accesses " << o.accesses << ", memory " << o.memory_accesses
        << ", far " << o.far_queries << " (" << std::setprecision(1) << 100.0 * report.far_fraction(op) << "%)\n";
  }
  out << std::defaultfloat;
}

}  // namespace cohmesh
