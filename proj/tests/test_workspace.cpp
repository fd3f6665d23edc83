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

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "cohmesh/error.hpp"
#include "cohmesh/hugepages.hpp"
#include "cohmesh/layout.hpp"
#include "cohmesh/matrix_market.hpp"
#include "cohmesh/schedule_io.hpp"

using namespace cohmesh;

namespace {

SparseMatrix parse_mtx(const std::string& text) {
  std::istringstream in(text);
  return read_matrix_market(in, "test.mtx");
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_mtx(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("read_matrix_market") {
  SUBCASE("1x1 real") {
    const auto m = parse_mtx("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2.5\n");
    CHECK(m.n_rows == 1);
    CHECK(m.nnz() == 1);
    CHECK(m.entries[0] == Triple{0, 0, 2.5});
  }
  SUBCASE("pattern values default to one") {
    const auto m = parse_mtx("%%MatrixMarket matrix coordinate pattern general\n% comment\n2 3 2\n1 3\n2 1\n");
    REQUIRE(m.nnz() == 2);
    CHECK(m.entries[0] == Triple{0, 2, 1.0});
    CHECK(m.entries[1] == Triple{1, 0, 1.0});
  }
  SUBCASE("symmetric storage is expanded") {
    const auto m = parse_mtx("%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n1 1 1\n2 1 4\n3 2 5\n");
    CHECK(m.nnz() == 5);
    CHECK(std::is_sorted(m.entries.begin(), m.entries.end(),
                         [](const Triple& a, const Triple& b) { return std::pair(a.row, a.col) < std::pair(b.row, b.col); }));
    CHECK(m.entries[1] == Triple{0, 1, 4.0});
  }
  SUBCASE("errors carry line numbers") {
    CHECK(parse_error_line("%%MatrixMarket matrix array real general\n1 1\n1\n") == 1);
    CHECK(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2\n") == 2);
    CHECK(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n3 1 1\n") == 4);
    CHECK(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n1 1 2\n") == 4);
    CHECK(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n2 2 1\n") > 0);
  }
}

TEST_CASE("emulate_hugepage_pool") {
  const auto full = emulate_hugepage_pool(5, 16);
  REQUIRE(full.pages.size() == 16);
  std::set<PhysAddr> distinct(full.pages.begin(), full.pages.end());
  CHECK(distinct.size() == 16);
  for (auto p : full.pages) {
    CHECK(p % kHugepageBytes == 0);
    CHECK(p / kHugepageBytes < 16);
  }
  CHECK(emulate_hugepage_pool(5, 1).pages.size() == 1);
  CHECK(emulate_hugepage_pool(9, 7).pages == emulate_hugepage_pool(9, 7).pages);
  CHECK_THROWS_AS(emulate_hugepage_pool(0, 0), Error);
  CHECK_THROWS_AS(emulate_hugepage_pool(0, 17), Error);
}

TEST_CASE("assign_hugepages") {
  const auto pool = emulate_hugepage_pool(11, 16);
  CHECK(assign_hugepages({}, pool).freed.size() == 16);

  const std::vector<PhysAddr> two{0x0, 0x4000'0000};
  const auto r = assign_hugepages(two, pool);
  CHECK(r.assigned == two);
  CHECK(r.freed.size() == 14);
  for (auto p : r.freed) CHECK(std::find(two.begin(), two.end(), p) == two.end());

  const std::vector<PhysAddr> missing{0x4'0000'0000};
  CHECK_THROWS_AS(assign_hugepages(missing, pool), Error);
  const std::vector<PhysAddr> unaligned{0x1000};
  CHECK_THROWS_AS(assign_hugepages(unaligned, pool), Error);
  const std::vector<PhysAddr> dup{0x0, 0x0};
  CHECK_THROWS_AS(assign_hugepages(dup, pool), Error);
}

TEST_CASE("property: assigned plus freed is the pool") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pool = emulate_hugepage_pool(rng(), 1 + rng() % 16);
    std::vector<PhysAddr> req;
    for (auto p : pool.pages)
      if (rng() & 1) req.push_back(p);
    std::shuffle(req.begin(), req.end(), rng);
    const auto r = assign_hugepages(req, pool);
    REQUIRE(r.assigned == req);
    std::vector<PhysAddr> all = r.assigned;
    all.insert(all.end(), r.freed.begin(), r.freed.end());
    std::sort(all.begin(), all.end());
    std::vector<PhysAddr> expect = pool.pages;
    std::sort(expect.begin(), expect.end());
    REQUIRE(all == expect);
  }
}

TEST_CASE("layout_blocks") {
  SUBCASE("1 GiB structure fills page 0") {
    const std::vector<StructureSpec> specs{{"B", kHugepageBytes, 8, PhysAddr{0}}};
    const std::vector<PhysAddr> pages{0};
    const auto l = layout_blocks(specs, pages);
    CHECK(l.line_of("B", 0) == 0);
    CHECK(l.line_of("B", kHugepageBytes / 8 - 1) == kHugepageBytes - 64);
    CHECK_THROWS_AS(l.line_of("B", kHugepageBytes / 8), Error);
    CHECK_FALSE(l.at("B").spans_pages);
  }
  SUBCASE("single-precision N=16384 matrix fills exactly one page") {
    const std::uint64_t n = 16384;
    const std::vector<StructureSpec> specs{{"A", 4 * n * n, 4, std::nullopt}, {"x", 4 * n, 4, std::nullopt}};
    const std::vector<PhysAddr> pages{0x3'0000'0000, 0x5'0000'0000};
    const auto l = layout_blocks(specs, pages);
    CHECK(l.at("A").base == 0x3'0000'0000);
    CHECK(l.at("A").end() == 0x3'4000'0000);
    CHECK(l.at("x").base == 0x5'0000'0000);
    CHECK(l.pages() == pages);
  }
  SUBCASE("spanning needs the next physical page") {
    const std::vector<StructureSpec> specs{{"y", 4096, 8, std::nullopt}, {"A", kHugepageBytes * 3 / 2, 8, std::nullopt}};
    const std::vector<PhysAddr> adjacent{0x0, 0x4000'0000};
    const auto l = layout_blocks(specs, adjacent);
    CHECK(l.at("A").end() == 4096 + kHugepageBytes * 3 / 2);
    CHECK(l.at("A").spans_pages);
    CHECK(l.at("A").base == 4096);
    const std::vector<PhysAddr> gap{0x0, 0x8000'0000};
    CHECK_THROWS_AS(layout_blocks(specs, gap), Error);
  }
  SUBCASE("a structure that fits whole moves to the next page") {
    const std::vector<StructureSpec> specs{{"y", 4096, 8, std::nullopt}, {"A", kHugepageBytes, 8, std::nullopt}};
    const std::vector<PhysAddr> pages{0x0, 0x8000'0000};
    const auto l = layout_blocks(specs, pages);
    CHECK(l.at("A").base == 0x8000'0000);
    CHECK_FALSE(l.at("A").spans_pages);
  }
  SUBCASE("overflow and bad input") {
    const std::vector<StructureSpec> big{{"A", 2 * kHugepageBytes, 8, std::nullopt}};
    const std::vector<PhysAddr> one{0};
    CHECK_THROWS_AS(layout_blocks(big, one), Error);
    const std::vector<StructureSpec> odd{{"A", 100, 8, std::nullopt}};
    CHECK_THROWS_AS(layout_blocks(odd, one), Error);
    const std::vector<StructureSpec> twice{{"A", 64, 8, std::nullopt}, {"A", 64, 8, std::nullopt}};
    CHECK_THROWS_AS(layout_blocks(twice, one), Error);
  }
}

TEST_CASE("property: layouts are line-aligned and disjoint") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pool = emulate_hugepage_pool(rng(), 4);
    std::vector<StructureSpec> specs;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i)
      specs.push_back({"s" + std::to_string(i), 64 * (1 + rng() % (1u << 22)), 8, std::nullopt});
    const auto l = layout_blocks(specs, pool.pages);
    auto placed = std::vector<PlacedStructure>(l.structures().begin(), l.structures().end());
    std::sort(placed.begin(), placed.end(), [](const auto& a, const auto& b) { return a.base < b.base; });
    for (std::size_t i = 0; i < placed.size(); ++i) {
      REQUIRE(placed[i].base % 64 == 0);
      if (i > 0) REQUIRE(placed[i - 1].end() <= placed[i].base);
      const PhysAddr page = placed[i].base & ~(kHugepageBytes - 1);
      REQUIRE(std::find(pool.pages.begin(), pool.pages.end(), page) != pool.pages.end());
    }
  }
}

TEST_CASE("layout JSON round trip") {
  const std::vector<PhysAddr> pages{0x2'0000'0000};
  const auto l = layout_matvec(100, 200, 1234, 4, pages);
  std::stringstream ss;
  write_layout(ss, l);
  const auto back = read_layout(ss);
  REQUIRE(back.structures().size() == l.structures().size());
  for (std::size_t i = 0; i < l.structures().size(); ++i) {
    CHECK(back.structures()[i].name == l.structures()[i].name);
    CHECK(back.structures()[i].base == l.structures()[i].base);
    CHECK(back.structures()[i].size_bytes == l.structures()[i].size_bytes);
    CHECK(back.structures()[i].elem_bytes == l.structures()[i].elem_bytes);
  }
  CHECK(l.at("A").base == 0x2'0000'0000);
}

TEST_CASE("schedule text round trip") {
  Schedule s;
  s.tiles.push_back({TileCoord{0, 0}, {}, 0});
  s.tiles[0].push({2, 5, 0, 5});
  s.tiles[0].push({3, 10, 1, 8});
  s.tiles.push_back({TileCoord{3, 6}, {}, 0});
  s.tiles.push_back({TileCoord{1, 2}, {}, 0});
  s.tiles[2].push({0, 0, 0, 1});
  std::stringstream ss;
  write_schedule(ss, s, "test");
  const auto back = read_schedule(ss);
  REQUIRE(back.tiles.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.tiles[i].tile == s.tiles[i].tile);
    CHECK(back.tiles[i].statements == s.tiles[i].statements);
    CHECK(back.tiles[i].load_flops == s.tiles[i].load_flops);
  }
  std::istringstream bad("tile 0 0\n1 2 3\n");
  CHECK_THROWS_AS(read_schedule(bad), ParseError);
  std::istringstream orphan("1 2 3 4\n");
  CHECK_THROWS_AS(read_schedule(orphan), ParseError);
}
