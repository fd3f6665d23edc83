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

#include "cohmesh/schedule_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cohmesh/error.hpp"

namespace cohmesh {

Schedule read_schedule(std::istream& in, const std::string& source) {
  Schedule sched;
  std::set<TileCoord> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (line.rfind("tile", 0) == 0) {
      std::string kw;
      TileCoord t;
      if (!(ls >> kw >> t.col >> t.row) || kw != "tile") throw ParseError(source, lineno, "expected 'tile <col> <row>'");
      if (!seen.insert(t).second) throw ParseError(source, lineno, "tile listed twice");
      sched.tiles.push_back({t, {}, 0});
      continue;
    }
    if (sched.tiles.empty()) throw ParseError(source, lineno, "statement before the first 'tile' line");
    long long i = -1, j = -1, k = -1, w = -1;
    std::string extra;
    if (!(ls >> i >> j >> k >> w) || (ls >> extra)) throw ParseError(source, lineno, "expected '<i> <j> <k> <w>'");
    if (i < 0 || j < 0 || k < 0 || w < 1 || i > UINT32_MAX || k > UINT32_MAX || w > UINT32_MAX) {
      throw ParseError(source, lineno, "statement fields out of range");
    }
    sched.tiles.back().push({static_cast<std::uint32_t>(i), static_cast<std::uint64_t>(j),
                             static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(w)});
  }
  return sched;
}

Schedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open schedule " + path.string());
  return read_schedule(in, path.string());
}

void write_schedule(std::ostream& out, const Schedule& schedule, const std::string& comment) {
  out << "# cohmesh schedule\n";
  if (!comment.empty()) out << "# " << comment << '\n';
  for (const auto& work : schedule.tiles) {
    out << "tile " << work.tile.col << ' ' << work.tile.row << '\n';
    for (const auto& s : work.statements) out << s.row << ' ' << s.a_start << ' ' << s.x_start << ' ' << s.width << '\n';
  }
}

}  // namespace cohmesh
