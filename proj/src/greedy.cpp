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

#include <set>
#include <unordered_map>

#include "cohmesh/block_state.hpp"
#include "cohmesh/error.hpp"
#include "cohmesh/schedulers.hpp"

namespace cohmesh {

namespace {

struct StatementLines {
  std::vector<PhysAddr> lines;
};

}  // namespace

Schedule greedy_schedule(std::span<const Statement> statements, const BlockLayout& layout, const XorMaskSet& map,
                         const MeshConfig& mesh, std::vector<GreedyPick>* trace) {
  if (statements.empty()) throw Error("greedy schedule needs at least one statement");
  const std::vector<TileCoord> order = tile_visit_order(mesh);

  // Resolve operands once; a statement's cost only moves when one of its
  // lines changes forwarder.
  std::vector<StatementLines> lines(statements.size());
  std::unordered_map<PhysAddr, std::vector<std::size_t>> readers;
  std::vector<OperandLine> scratch;
  std::uint64_t total_flops = 0;
  for (std::size_t i = 0; i < statements.size(); ++i) {
    statement_lines(statements[i], layout, scratch);
    for (const auto& ol : scratch) {
      lines[i].lines.push_back(ol.line);
      readers[ol.line].push_back(i);
    }
    total_flops += statements[i].flops();
  }

  BlockStateTable states(map, mesh);
  auto cost_of = [&](std::size_t i, TileCoord t) {
    Cycles c = 0;
    for (PhysAddr l : lines[i].lines) c += block_access_cost(t, states.get(l), mesh);
    return c;
  };

  const std::uint64_t num_tiles = order.size();
  std::vector<bool> taken(statements.size(), false);
  std::vector<Cycles> cost(statements.size(), 0);
  std::size_t left = statements.size();

  Schedule sched;
  for (std::size_t ti = 0; ti < order.size() && left > 0; ++ti) {
    const TileCoord t = order[ti];
    const bool last = ti + 1 == order.size();
    TileWork work{t, {}, 0};

    std::set<std::pair<Cycles, std::size_t>> queue;
    for (std::size_t i = 0; i < statements.size(); ++i) {
      if (taken[i]) continue;
      cost[i] = cost_of(i, t);
      queue.emplace(cost[i], i);
    }

    // Load(t) < L_T / |T|, kept in integers.
    while (!queue.empty() && (last || work.load_flops * num_tiles < total_flops)) {
      const auto [c, pick] = *queue.begin();
      queue.erase(queue.begin());
      taken[pick] = true;
      --left;
      work.push(statements[pick]);
      if (trace) trace->push_back({t, pick, c});

      for (PhysAddr l : lines[pick].lines) {
        if (const auto& bs = states.get(l); bs.forwarder && *bs.forwarder == t) continue;
        states.set_forwarder(l, t);
        for (std::size_t other : readers[l]) {
          if (taken[other]) continue;
          const Cycles updated = cost_of(other, t);
          if (updated == cost[other]) continue;
          queue.erase({cost[other], other});
          cost[other] = updated;
          queue.emplace(updated, other);
        }
      }
    }
    sched.tiles.push_back(std::move(work));
  }
  return sched;
}

}  // namespace cohmesh
