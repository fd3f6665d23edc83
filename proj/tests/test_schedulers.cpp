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

#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "cohmesh/error.hpp"
#include "cohmesh/schedulers.hpp"
#include "cohmesh/simulator.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace cohmesh;

namespace {

/// Upper-left corner of a small FEM-like matrix: row r holds the listed
/// column ranges (inclusive).
SparseMatrix corner_matrix() {
  const std::vector<std::vector<std::pair<int, int>>> rows = {
      {{0, 0}}, {{1, 4}}, {{0, 4}}, {{1, 8}}, {{0, 8}}, {{3, 8}}, {{3, 8}}, {{3, 8}}, {{3, 8}}};
  std::vector<Triple> e;
  for (std::uint32_t r = 0; r < rows.size(); ++r)
    for (auto [a, b] : rows[r])
      for (int c = a; c <= b; ++c) e.push_back({r, static_cast<std::uint32_t>(c), 1.0});
  return make_sparse(9, 9, std::move(e));
}

}  // namespace

TEST_CASE("mine_regular_statements reproduces the corner listing") {
  const auto stmts = mine_regular_statements(corner_matrix(), 8);
  const std::vector<std::string> expected = {
      "y[0] += A[0] * x[0]",         "y[1] += A[1:4] * x[1:4]",     "y[2] += A[5:9] * x[0:4]",
      "y[3] += A[10:17] * x[1:8]",   "y[4] += A[18:25] * x[0:7]",   "y[4] += A[26] * x[8]",
      "y[5] += A[27:32] * x[3:8]",   "y[6] += A[33:38] * x[3:8]",   "y[7] += A[39:44] * x[3:8]",
      "y[8] += A[45:50] * x[3:8]"};
  REQUIRE(stmts.size() == expected.size());
  for (std::size_t i = 0; i < stmts.size(); ++i) CHECK(to_string(stmts[i]) == expected[i]);
}

TEST_CASE("mine_regular_statements edge cases") {
  std::vector<Triple> diag;
  for (std::uint32_t i = 0; i < 50; ++i) diag.push_back({i, i, 2.0});
  const auto d = mine_regular_statements(make_sparse(50, 50, diag));
  REQUIRE(d.size() == 50);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == Statement{static_cast<std::uint32_t>(i), i, static_cast<std::uint32_t>(i), 1});

  std::vector<Triple> dense_row;
  for (std::uint32_t c = 0; c < 20; ++c) dense_row.push_back({0, c, 1.0});
  const auto r = mine_regular_statements(make_sparse(1, 20, dense_row), 8);
  REQUIRE(r.size() == 3);
  CHECK(r[0].width == 8);
  CHECK(r[1].width == 8);
  CHECK(r[2].width == 4);
  CHECK(r[2].x_start == 16);

  CHECK(mine_regular_statements(make_sparse(5, 5, {})).empty());
  CHECK_THROWS_AS(mine_regular_statements(make_sparse(1, 1, {}), 0), Error);
}

TEST_CASE("property: mined statements cover every nonzero exactly once") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = instances::random_sparse(rng, 1 + rng() % 40, 1 + rng() % 40, 0.05 + (rng() % 90) / 100.0);
    const auto w = static_cast<std::uint32_t>(1 + rng() % 10);
    const auto stmts = mine_regular_statements(m, w);
    std::vector<Triple> covered;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      const auto& s = stmts[i];
      REQUIRE(s.width >= 1);
      REQUIRE(s.width <= w);
      for (std::uint32_t k = 0; k < s.width; ++k) {
        REQUIRE(m.entries[s.a_start + k].row == s.row);
        REQUIRE(m.entries[s.a_start + k].col == s.x_start + k);
        covered.push_back(m.entries[s.a_start + k]);
      }
      // Runs are maximal: a follow-on chunk in the same run only after a full one.
      if (i > 0 && stmts[i - 1].row == s.row && stmts[i - 1].x_start + stmts[i - 1].width == s.x_start) {
        REQUIRE(stmts[i - 1].width == w);
      }
    }
    REQUIRE(covered == m.entries);
  }
}

TEST_CASE("sequential_block_schedule") {
  std::vector<TileCoord> tiles64;
  for (int i = 0; i < 64; ++i) tiles64.push_back({i % 8, i / 8});
  std::vector<Statement> rows64;
  for (std::uint32_t r = 0; r < 64; ++r) rows64.push_back({r, r, 0, 1});
  const auto s64 = sequential_block_schedule(rows64, 64, tiles64);
  for (std::size_t i = 0; i < 64; ++i) {
    REQUIRE(s64.tiles[i].statements.size() == 1);
    CHECK(s64.tiles[i].statements[0].row == i);
  }

  const std::vector<TileCoord> four{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  std::vector<Statement> rows10;
  for (std::uint32_t r = 0; r < 10; ++r) rows10.push_back({r, r, 0, 1});
  const auto s10 = sequential_block_schedule(rows10, 10, four);
  CHECK(s10.tiles[0].statements.size() == 3);
  CHECK(s10.tiles[1].statements.size() == 3);
  CHECK(s10.tiles[2].statements.size() == 3);
  CHECK(s10.tiles[3].statements.size() == 1);

  const std::vector<TileCoord> one{{2, 2}};
  CHECK(sequential_block_schedule(rows10, 10, one).tiles[0].statements.size() == 10);
  CHECK_THROWS_AS(sequential_block_schedule(rows10, 10, std::span<const TileCoord>{}), Error);
}

TEST_CASE("subnuma_schedule") {
  const std::vector<ActiveTile> one_per_q{{{0, 0}, Quadrant{0}}, {{1, 0}, Quadrant{1}}, {{0, 1}, Quadrant{2}}, {{1, 1}, Quadrant{3}}};

  SUBCASE("minimal set, 8 KiB matrix") {
    const auto s = subnuma_schedule(0, 8, 256, 4, one_per_q, XorMaskSet::minimal_quadrant());
    const auto& q0 = s.tiles[0].statements;
    REQUIRE(q0.size() == 32);
    for (std::size_t i = 0; i < q0.size(); ++i) CHECK(q0[i].a_start * 4 == 256 * i);
    std::set<std::uint64_t> all;
    for (const auto& t : s.tiles) {
      CHECK(t.statements.size() == 32);
      for (const auto& st : t.statements) all.insert(st.a_start);
    }
    CHECK(all.size() == 128);
  }

  SUBCASE("seed-42 set, several tiles per quadrant") {
    const auto map = XorMaskSet::random_quadrant_valid(42);
    const auto mesh = MeshConfig::knl_default();
    const PhysAddr base = 0x3'4000'0000;
    const auto s = subnuma_schedule(base, 64, 1024, 4, mesh.tiles, map);
    std::map<std::uint64_t, int> owner_count;
    for (const auto& t : s.tiles) {
      const auto q = mesh.find_active(t.tile)->quadrant.id;
      PhysAddr prev = 0;
      for (const auto& st : t.statements) {
        const PhysAddr line = base + st.a_start * 4;
        REQUIRE(oracle::quadrant(line, map) == q);
        REQUIRE(line > prev);
        REQUIRE(st.row == st.a_start / 1024);
        REQUIRE(st.x_start == st.a_start % 1024);
        REQUIRE(st.width == 16);
        prev = line;
        ++owner_count[line];
      }
    }
    REQUIRE(owner_count.size() == 64 * 1024 * 4 / 64);
    for (const auto& [line, n] : owner_count) REQUIRE(n == 1);

    // Brute-force partition: per quadrant, the concatenated tile shares are the filter output.
    for (unsigned q = 0; q < 4; ++q) {
      std::vector<PhysAddr> joined;
      std::size_t lo = SIZE_MAX, hi = 0;
      for (const auto& t : s.tiles) {
        if (mesh.find_active(t.tile)->quadrant.id != q) continue;
        lo = std::min(lo, t.statements.size());
        hi = std::max(hi, t.statements.size());
        for (const auto& st : t.statements) joined.push_back(base + st.a_start * 4);
      }
      CHECK(joined == oracle::filter_lines(base, 64 * 1024 * 4, q, map));
      CHECK(hi - lo <= 1);
    }
  }

  SUBCASE("errors") {
    const std::vector<ActiveTile> no_q3{{{0, 0}, Quadrant{0}}, {{1, 0}, Quadrant{1}}, {{0, 1}, Quadrant{2}}};
    CHECK_THROWS_AS(subnuma_schedule(0, 8, 256, 4, no_q3, XorMaskSet::minimal_quadrant()), Error);
    CHECK_THROWS_AS(subnuma_schedule(64, 8, 256, 4, one_per_q, XorMaskSet::minimal_quadrant()), Error);
    CHECK_THROWS_AS(subnuma_schedule(0, 8, 256, 4, one_per_q, XorMaskSet::zero(2, 4)), NotQuadrantValid);
  }
}

TEST_CASE("tile_visit_order") {
  const auto mesh = MeshConfig::knl_default();
  const auto order = tile_visit_order(mesh);
  REQUIRE(order.size() == mesh.tiles.size());
  const std::vector<TileCoord> corners{{0, 0}, {5, 0}, {0, 6}, {5, 6}};
  CHECK(std::vector<TileCoord>(order.begin(), order.begin() + 4) == corners);
  CHECK(worst_case_trip(order.back(), mesh) == 18);
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto a = oracle::worst_trip(order[i - 1], mesh);
    const auto b = oracle::worst_trip(order[i], mesh);
    REQUIRE(a >= b);
    if (a == b) REQUIRE(std::pair(order[i - 1].row, order[i - 1].col) < std::pair(order[i].row, order[i].col));
  }

  MeshConfig one;
  one.cols = one.rows = 1;
  one.tiles = {{{0, 0}, Quadrant{0}}};
  CHECK(tile_visit_order(one) == std::vector<TileCoord>{{0, 0}});
}

TEST_CASE("greedy_schedule basics") {
  const auto inst = instances::greedy_instance(3);

  SUBCASE("single tile takes everything") {
    MeshConfig one;
    one.cols = one.rows = 1;
    one.tiles = {{{0, 0}, Quadrant{0}}};
    one.cha_placement = {{0, 0}};
    one.memory_controller_tiles = {TileCoord{0, 0}, TileCoord{0, 0}, TileCoord{0, 0}, TileCoord{0, 0}};
    const auto s = greedy_schedule(inst.statements, inst.layout, XorMaskSet::zero(2, 1), one);
    REQUIRE(s.tiles.size() == 1);
    std::uint64_t flops = 0;
    for (const auto& st : inst.statements) flops += st.flops();
    CHECK(s.tiles[0].load_flops == flops);
    CHECK(s.tiles[0].statements.size() == inst.statements.size());
  }

  SUBCASE("equal FLOPs spread evenly") {
    MeshConfig quad;
    quad.cols = quad.rows = 2;
    quad.tiles = {{{0, 0}, Quadrant{0}}, {{1, 0}, Quadrant{1}}, {{0, 1}, Quadrant{2}}, {{1, 1}, Quadrant{3}}};
    quad.cha_placement = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    quad.memory_controller_tiles = {TileCoord{0, 0}, TileCoord{1, 0}, TileCoord{0, 1}, TileCoord{1, 1}};
    std::vector<Statement> eight;
    for (std::uint32_t i = 0; i < 8; ++i) eight.push_back({i % 4, i, i, 1});
    const std::array<PhysAddr, 1> page{0};
    const auto layout = layout_matvec(4, 8, 8, 8, page);
    const auto s = greedy_schedule(eight, layout, XorMaskSet::minimal_quadrant(), quad);
    REQUIRE(s.tiles.size() == 4);
    for (const auto& t : s.tiles) CHECK(t.statements.size() == 2);
  }

  SUBCASE("empty input is an error") {
    CHECK_THROWS_AS(greedy_schedule({}, inst.layout, inst.map, inst.mesh), Error);
  }
}

TEST_CASE("property: greedy schedules are balanced partitions of cost-minimal picks") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = instances::greedy_instance(seed);
    std::vector<GreedyPick> trace;
    const auto s = greedy_schedule(inst.statements, inst.layout, inst.map, inst.mesh, &trace);

    REQUIRE(trace.size() == inst.statements.size());
    std::vector<int> seen(inst.statements.size(), 0);
    for (const auto& p : trace) ++seen[p.statement];
    for (int n : seen) REQUIRE(n == 1);
    REQUIRE(s.num_statements() == inst.statements.size());

    const std::uint64_t total = s.total_flops();
    const std::uint64_t tiles = inst.mesh.tiles.size();
    std::uint64_t max_flops = 0;
    for (const auto& st : inst.statements) max_flops = std::max(max_flops, st.flops());
    for (std::size_t i = 0; i + 1 < s.tiles.size(); ++i) {
      const auto load = s.tiles[i].load_flops;
      REQUIRE(load * tiles >= total);
      REQUIRE(load * tiles < total + max_flops * tiles);
    }
    const auto order = tile_visit_order(inst.mesh);
    for (std::size_t i = 0; i < s.tiles.size(); ++i) REQUIRE(s.tiles[i].tile == order[i]);

    REQUIRE(oracle::replay_greedy(inst.statements, trace, inst.layout, inst.map, inst.mesh).empty());
    REQUIRE(greedy_schedule(inst.statements, inst.layout, inst.map, inst.mesh).tiles.size() == s.tiles.size());
  }
}

TEST_CASE("sub-NUMA schedule keeps matrix directory queries local") {
  const auto map = XorMaskSet::random_quadrant_valid(42);
  const auto mesh = MeshConfig::knl_default();
  const std::array<PhysAddr, 1> page{0x2'0000'0000};
  const auto layout = layout_matvec(64, 256, 64 * 256, 4, page);
  const auto subnuma = subnuma_schedule(layout.at("A").base, 64, 256, 4, mesh.tiles, map);
  const auto seq = sequential_block_schedule(dense_line_statements(64, 256, 4), 64, tile_visit_order(mesh));
  const auto rs = simulate_schedule(subnuma, layout, map, mesh);
  const auto rq = simulate_schedule(seq, layout, map, mesh);
  CHECK(rs.per_operand[1].far_queries == 0);
  CHECK(rs.per_operand[1].accesses == 64 * 256 * 4 / 64);
  CHECK(rq.per_operand[1].accesses == rs.per_operand[1].accesses);
  CHECK(rq.far_fraction(Operand::kA) > 0.5);
}
