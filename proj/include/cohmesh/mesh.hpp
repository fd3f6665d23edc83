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
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cohmesh/address_mapping.hpp"

namespace cohmesh {

using Cycles = std::int64_t;

struct TileCoord {
  int col = 0;
  int row = 0;

  friend constexpr auto operator<=>(const TileCoord&, const TileCoord&) = default;
};

struct ActiveTile {
  TileCoord coord;
  Quadrant quadrant;
};

/// Grid geometry plus everything the cost model needs to know about it.
///
/// A CHA index c lives on cha_placement[c]; the tile hosting it must sit in
/// quadrant c & 3. Cold lines are served from memory_controller_tiles[q] for
/// the quadrant q of the line's directory.
struct MeshConfig {
  int cols = 0;
  int rows = 0;
  std::vector<ActiveTile> tiles;
  std::vector<TileCoord> cha_placement;
  std::array<TileCoord, kNumQuadrants> memory_controller_tiles{};
  Cycles hop_weight_horizontal = 2;
  Cycles hop_weight_vertical = 1;
  Cycles lambda_l2 = 12;
  Cycles lambda_mcdram = 115;
  /// When set, the simulator also charges the directory-to-data round trip
  /// inside the zero-overhead rectangle.
  bool charge_rectangle_path = true;

  /// 6x7 grid with 38 active tiles hosting CHAs 0..37.
  static MeshConfig knl_default();

  /// Throws cohmesh::Error on any inconsistency.
  void validate() const;

  bool in_grid(TileCoord t) const { return t.col >= 0 && t.col < cols && t.row >= 0 && t.row < rows; }
  const ActiveTile* find_active(TileCoord t) const;
  std::vector<TileCoord> active_coords() const;
};

/// One-way weighted hop distance.
Cycles weighted_distance(TileCoord a, TileCoord b, const MeshConfig& mesh);

/// Extra round-trip cycles for requestor t outside the rectangle spanned by
/// the directory tile and the data tile; zero inside it.
Cycles access_overhead(TileCoord t, TileCoord directory, TileCoord data, const MeshConfig& mesh);

/// Query plus response travel for a requestor inside the rectangle.
Cycles rectangle_path(TileCoord directory, TileCoord data, const MeshConfig& mesh);

/// Round trip to the farthest active tile.
Cycles worst_case_trip(TileCoord t, const MeshConfig& mesh);

/// Where the directory entry for a CHA index lives. Indices the mask set
/// leaves unmapped fall back to the memory-controller tile of their quadrant
/// and are flagged.
struct DirectoryHome {
  TileCoord tile;
  Quadrant quadrant;
  bool unmapped = false;
};

DirectoryHome resolve_directory(std::uint32_t raw_cha, const XorMaskSet& map, const MeshConfig& mesh);

// Mesh config file (JSON). See data/mesh_knl_default.json for the layout.
MeshConfig read_mesh_config(std::istream& in, const std::string& source = "<stream>");
MeshConfig load_mesh_config(const std::filesystem::path& path);
void write_mesh_config(std::ostream& out, const MeshConfig& mesh);

}  // namespace cohmesh
