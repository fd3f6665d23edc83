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

#include "cohmesh/statement.hpp"

#include <algorithm>

#include "cohmesh/error.hpp"

namespace cohmesh {

namespace {

std::string slice(std::uint64_t start, std::uint32_t width) {
  if (width == 1) return std::to_string(start);
  return std::to_string(start) + ":" + std::to_string(start + width - 1);
}

std::string_view a_operand(const BlockLayout& layout) {
  if (layout.find("A") != nullptr) return "A";
  if (layout.find("B") != nullptr) return "B";
  throw Error("layout has neither an 'A' nor a 'B' structure for the matrix operand");
}

void push_run(const BlockLayout& layout, std::string_view name, Operand op, std::uint64_t first,
              std::uint32_t width, std::vector<OperandLine>& out) {
  const auto* s = layout.find(name);
  if (s == nullptr) {
    throw Error(std::string("operand ") + operand_name(op) + " has no structure '" + std::string(name) + "' in the layout");
  }
  PhysAddr last = 0;
  bool any = false;
  for (std::uint32_t k = 0; k < width; ++k) {
    PhysAddr line;
    try {
      line = layout.line_of(name, first + k);
    } catch (const Error& e) {
      throw Error(std::string("unresolved operand ") + operand_name(op) + ": " + e.what());
    }
    if (!any || line != last) out.push_back({op, line});
    last = line;
    any = true;
  }
}

}  // namespace

std::string to_string(const Statement& s) {
  return "y[" + std::to_string(s.row) + "] += A[" + slice(s.a_start, s.width) + "] * x[" +
         slice(s.x_start, s.width) + "]";
}

std::size_t Schedule::num_statements() const {
  std::size_t n = 0;
  for (const auto& t : tiles) n += t.statements.size();
  return n;
}

std::uint64_t Schedule::total_flops() const {
  std::uint64_t n = 0;
  for (const auto& t : tiles) n += t.load_flops;
  return n;
}

const TileWork* Schedule::find(TileCoord t) const {
  auto it = std::find_if(tiles.begin(), tiles.end(), [&](const TileWork& w) { return w.tile == t; });
  return it == tiles.end() ? nullptr : &*it;
}

const char* operand_name(Operand op) {
  switch (op) {
    case Operand::kY: return "y";
    case Operand::kA: return "A";
    case Operand::kX: return "x";
  }
  return "?";
}

void statement_lines(const Statement& s, const BlockLayout& layout, std::vector<OperandLine>& out) {
  out.clear();
  if (s.width == 0) throw Error("statement of width 0");
  push_run(layout, "y", Operand::kY, s.row, 1, out);
  push_run(layout, a_operand(layout), Operand::kA, s.a_start, s.width, out);
  push_run(layout, "x", Operand::kX, s.x_start, s.width, out);
}

}  // namespace cohmesh
