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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cohmesh/address_mapping.hpp"

namespace cohmesh {

struct StructureSpec {
  std::string name;
  std::uint64_t size_bytes = 0;  // multiple of 64
  std::uint32_t elem_bytes = 8;
  /// Page to start on. Unset means: right after the previous structure.
  std::optional<PhysAddr> page;
};

struct PlacedStructure {
  std::string name;
  PhysAddr base = 0;
  std::uint64_t size_bytes = 0;
  std::uint32_t elem_bytes = 8;
  bool spans_pages = false;

  PhysAddr end() const { return base + size_bytes; }
};

/// Static assumption of where each logical structure lives physically.
/// Structures are contiguous and never overlap.
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(std::vector<PlacedStructure> structures);

  std::span<const PlacedStructure> structures() const { return structures_; }
  const PlacedStructure* find(std::string_view name) const;
  const PlacedStructure& at(std::string_view name) const;

  /// Line-aligned address of element `element`; throws if it lies past the end.
  PhysAddr line_of(std::string_view name, std::uint64_t element) const;

  /// Distinct 1 GiB page bases touched, ascending.
  std::vector<PhysAddr> pages() const;

 private:
  std::vector<PlacedStructure> structures_;
};

/// Packs structures onto the assigned pages. A structure larger than what is
/// left of its page continues on the physically next page, which must also be
/// assigned; such structures are flagged with spans_pages.
BlockLayout layout_blocks(std::span<const StructureSpec> specs, std::span<const PhysAddr> assigned_pages);

/// Matrix-vector operands packed in the order A, y, x so that A starts on
/// the first assigned page. Sizes are rounded up to whole lines.
BlockLayout layout_matvec(std::uint64_t n_rows, std::uint64_t n_cols, std::uint64_t a_values,
                          std::uint32_t elem_bytes, std::span<const PhysAddr> assigned_pages);

// Layout file (JSON): {"structures": [{"name", "base", "size_bytes", "elem_bytes"}]}
BlockLayout read_layout(std::istream& in, const std::string& source = "<stream>");
BlockLayout load_layout(const std::filesystem::path& path);
void write_layout(std::ostream& out, const BlockLayout& layout);

}  // namespace cohmesh
