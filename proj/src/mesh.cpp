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

#include "cohmesh/mesh.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <set>

#include "cohmesh/error.hpp"

namespace cohmesh {

namespace {

std::string str(TileCoord t) { return "(" + std::to_string(t.col) + "," + std::to_string(t.row) + ")"; }

int gap(int v, int a, int b) {
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  if (v < lo) return lo - v;
  if (v > hi) return v - hi;
  return 0;
}

}  // namespace

MeshConfig MeshConfig::knl_default() {
  // Columns 0-2 / 3-5 and rows 0-2 / 3-6 form the four quadrants. Quadrants 0
  // and 1 own ten CHAs each (indices 0..37), so they take the taller bottom
  // half with two disabled positions apiece.
  MeshConfig m;
  m.cols = 6;
  m.rows = 7;
  const std::set<TileCoord> disabled = {{0, 4}, {0, 5}, {5, 4}, {5, 5}};
  auto quadrant_at = [](TileCoord t) {
    const bool right = t.col >= 3;
    const bool top = t.row <= 2;
    return Quadrant{static_cast<std::uint8_t>((top ? 2 : 0) | (right ? 1 : 0))};
  };
  std::array<std::vector<TileCoord>, kNumQuadrants> by_quadrant;
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      const TileCoord t{c, r};
      if (disabled.count(t)) continue;
      m.tiles.push_back({t, quadrant_at(t)});
      by_quadrant[quadrant_at(t).id].push_back(t);
    }
  }
  constexpr std::uint32_t kChas = 38;
  m.cha_placement.resize(kChas);
  std::array<std::size_t, kNumQuadrants> next{};
  for (std::uint32_t c = 0; c < kChas; ++c) {
    m.cha_placement[c] = by_quadrant[c & 3u].at(next[c & 3u]++);
  }
  m.memory_controller_tiles = {TileCoord{1, 6}, TileCoord{4, 6}, TileCoord{1, 0}, TileCoord{4, 0}};
  return m;
}

const ActiveTile* MeshConfig::find_active(TileCoord t) const {
  auto it = std::find_if(tiles.begin(), tiles.end(), [&](const ActiveTile& a) { return a.coord == t; });
  return it == tiles.end() ? nullptr : &*it;
}

std::vector<TileCoord> MeshConfig::active_coords() const {
  std::vector<TileCoord> out;
  out.reserve(tiles.size());
  for (const auto& t : tiles) out.push_back(t.coord);
  return out;
}

void MeshConfig::validate() const {
  if (cols <= 0 || rows <= 0) throw Error("mesh grid must be at least 1x1");
  if (hop_weight_horizontal < 0 || hop_weight_vertical < 0 || lambda_l2 < 0 || lambda_mcdram < 0) {
    throw Error("mesh weights and latencies must be nonnegative");
  }
  std::set<TileCoord> seen;
  for (const auto& t : tiles) {
    if (!in_grid(t.coord)) throw Error("active tile " + str(t.coord) + " is outside the grid");
    if (t.quadrant.id > 3) throw Error("active tile " + str(t.coord) + " has quadrant > 3");
    if (!seen.insert(t.coord).second) throw Error("active tile " + str(t.coord) + " listed twice");
  }
  std::set<TileCoord> hosts;
  for (std::size_t c = 0; c < cha_placement.size(); ++c) {
    const TileCoord t = cha_placement[c];
    const ActiveTile* a = find_active(t);
    if (a == nullptr) throw Error("CHA " + std::to_string(c) + " placed on inactive tile " + str(t));
    if (!hosts.insert(t).second) throw Error("two CHAs placed on tile " + str(t));
    if (a->quadrant.id != (c & 3u)) {
      throw Error("CHA " + std::to_string(c) + " sits on tile " + str(t) + " of quadrant " +
                  std::to_string(a->quadrant.id) + " but its low bits name quadrant " + std::to_string(c & 3u));
    }
  }
  for (const auto& mc : memory_controller_tiles) {
    if (!in_grid(mc)) throw Error("memory controller tile " + str(mc) + " is outside the grid");
  }
}

Cycles weighted_distance(TileCoord a, TileCoord b, const MeshConfig& mesh) {
  return mesh.hop_weight_horizontal * std::abs(a.col - b.col) + mesh.hop_weight_vertical * std::abs(a.row - b.row);
}

Cycles access_overhead(TileCoord t, TileCoord directory, TileCoord data, const MeshConfig& mesh) {
  const int dx = gap(t.col, directory.col, data.col);
  const int dy = gap(t.row, directory.row, data.row);
  return 2 * (mesh.hop_weight_horizontal * dx + mesh.hop_weight_vertical * dy);
}

Cycles rectangle_path(TileCoord directory, TileCoord data, const MeshConfig& mesh) {
  return 2 * weighted_distance(directory, data, mesh);
}

Cycles worst_case_trip(TileCoord t, const MeshConfig& mesh) {
  Cycles worst = 0;
  for (const auto& other : mesh.tiles) worst = std::max(worst, weighted_distance(t, other.coord, mesh));
  return 2 * worst;
}

DirectoryHome resolve_directory(std::uint32_t raw_cha, const XorMaskSet& map, const MeshConfig& mesh) {
  const Quadrant q = Quadrant::of_index(raw_cha);
  if (!map.is_mapped(raw_cha)) return {mesh.memory_controller_tiles[q.id], q, true};
  if (raw_cha >= mesh.cha_placement.size()) {
    throw Error("CHA " + std::to_string(raw_cha) + " has no tile in the mesh config");
  }
  return {mesh.cha_placement[raw_cha], q, false};
}

namespace {

using nlohmann::json;

TileCoord coord_from(const json& j) {
  if (j.is_array()) return {j.at(0).get<int>(), j.at(1).get<int>()};
  return {j.at("col").get<int>(), j.at("row").get<int>()};
}

}  // namespace

MeshConfig read_mesh_config(std::istream& in, const std::string& source) {
  MeshConfig m;
  try {
    const json doc = json::parse(in);
    m.cols = doc.at("cols").get<int>();
    m.rows = doc.at("rows").get<int>();
    m.hop_weight_horizontal = doc.value("hop_weight_horizontal", m.hop_weight_horizontal);
    m.hop_weight_vertical = doc.value("hop_weight_vertical", m.hop_weight_vertical);
    m.lambda_l2 = doc.value("lambda_l2", m.lambda_l2);
    m.lambda_mcdram = doc.value("lambda_mcdram", m.lambda_mcdram);
    m.charge_rectangle_path = doc.value("charge_rectangle_path", m.charge_rectangle_path);
    for (const auto& t : doc.at("active_tiles")) {
      const auto q = t.at("quadrant").get<int>();
      if (q < 0 || q > 3) throw Error("quadrant must be 0..3");
      m.tiles.push_back({coord_from(t), Quadrant{static_cast<std::uint8_t>(q)}});
    }
    for (const auto& c : doc.at("cha_placement")) m.cha_placement.push_back(coord_from(c));
    const auto& mcs = doc.at("memory_controller_tiles");
    if (mcs.size() != kNumQuadrants) throw Error("memory_controller_tiles needs one tile per quadrant");
    for (std::size_t q = 0; q < kNumQuadrants; ++q) m.memory_controller_tiles[q] = coord_from(mcs[q]);
  } catch (const json::exception& e) {
    throw Error(source + ": " + e.what());
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
  try {
    m.validate();
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
  return m;
}

MeshConfig load_mesh_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh config " + path.string());
  return read_mesh_config(in, path.string());
}

void write_mesh_config(std::ostream& out, const MeshConfig& m) {
  json doc;
  doc["cols"] = m.cols;
  doc["rows"] = m.rows;
  doc["hop_weight_horizontal"] = m.hop_weight_horizontal;
  doc["hop_weight_vertical"] = m.hop_weight_vertical;
  doc["lambda_l2"] = m.lambda_l2;
  doc["lambda_mcdram"] = m.lambda_mcdram;
  doc["charge_rectangle_path"] = m.charge_rectangle_path;
  json tiles = json::array();
  for (const auto& t : m.tiles) tiles.push_back({{"col", t.coord.col}, {"row", t.coord.row}, {"quadrant", t.quadrant.id}});
  doc["active_tiles"] = tiles;
  json placement = json::array();
  for (const auto& t : m.cha_placement) placement.push_back({t.col, t.row});
  doc["cha_placement"] = placement;
  json mcs = json::array();
  for (const auto& t : m.memory_controller_tiles) mcs.push_back({t.col, t.row});
  doc["memory_controller_tiles"] = mcs;
  out << doc.dump(2) << '\n';
}

}  // namespace cohmesh
