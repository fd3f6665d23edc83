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

#include "cohmesh/layout.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>

#include "cohmesh/error.hpp"
#include "cohmesh/hex.hpp"
#include "cohmesh/hugepages.hpp"

namespace cohmesh {

namespace {

std::uint64_t round_up_line(std::uint64_t bytes) { return (bytes + kLineBytes - 1) / kLineBytes * kLineBytes; }

}  // namespace

BlockLayout::BlockLayout(std::vector<PlacedStructure> structures) : structures_(std::move(structures)) {
  std::set<std::string> names;
  for (const auto& s : structures_) {
    if (s.name.empty()) throw Error("structure without a name");
    if (!names.insert(s.name).second) throw Error("structure '" + s.name + "' placed twice");
    if (s.base % kLineBytes != 0 || s.size_bytes % kLineBytes != 0) {
      throw Error("structure '" + s.name + "' is not line aligned");
    }
    if (s.elem_bytes == 0) throw Error("structure '" + s.name + "' has zero-byte elements");
  }
  std::vector<const PlacedStructure*> sorted;
  for (const auto& s : structures_) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->base < b->base; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1]->end() > sorted[i]->base) {
      throw Error("structures '" + sorted[i - 1]->name + "' and '" + sorted[i]->name + "' overlap");
    }
  }
}

const PlacedStructure* BlockLayout::find(std::string_view name) const {
  auto it = std::find_if(structures_.begin(), structures_.end(), [&](const auto& s) { return s.name == name; });
  return it == structures_.end() ? nullptr : &*it;
}

const PlacedStructure& BlockLayout::at(std::string_view name) const {
  if (const auto* s = find(name)) return *s;
  throw Error("layout has no structure '" + std::string(name) + "'");
}

PhysAddr BlockLayout::line_of(std::string_view name, std::uint64_t element) const {
  const auto& s = at(name);
  const std::uint64_t offset = element * s.elem_bytes;
  if (element >= s.size_bytes / s.elem_bytes) {
    throw Error("element " + std::to_string(element) + " of '" + s.name + "' lies outside its " +
                std::to_string(s.size_bytes) + " bytes");
  }
  return line_base(s.base + offset);
}

std::vector<PhysAddr> BlockLayout::pages() const {
  std::set<PhysAddr> out;
  for (const auto& s : structures_) {
    if (s.size_bytes == 0) continue;
    for (PhysAddr p = s.base & ~(kHugepageBytes - 1); p < s.end(); p += kHugepageBytes) out.insert(p);
  }
  return {out.begin(), out.end()};
}

BlockLayout layout_blocks(std::span<const StructureSpec> specs, std::span<const PhysAddr> assigned_pages) {
  if (assigned_pages.empty()) throw Error("layout needs at least one assigned hugepage");
  std::map<PhysAddr, std::uint64_t> used;  // bytes consumed per page
  for (PhysAddr p : assigned_pages) {
    if (p % kHugepageBytes != 0) throw Error("assigned page " + to_hex(p) + " is not 1 GiB aligned");
    if (!used.emplace(p, 0).second) throw Error("assigned page " + to_hex(p) + " listed twice");
  }

  std::vector<PlacedStructure> placed;
  std::size_t cursor = 0;  // index into assigned_pages
  for (const auto& spec : specs) {
    if (spec.size_bytes % kLineBytes != 0) {
      throw Error("structure '" + spec.name + "' size is not a multiple of 64 B");
    }
    if (spec.page) {
      auto it = std::find(assigned_pages.begin(), assigned_pages.end(), *spec.page);
      if (it == assigned_pages.end()) {
        throw Error("structure '" + spec.name + "' wants page " + to_hex(*spec.page) + ", which is not assigned");
      }
      cursor = static_cast<std::size_t>(it - assigned_pages.begin());
    } else {
      // Skip to the first page (from the cursor on) that can hold it whole.
      std::size_t probe = cursor;
      while (probe < assigned_pages.size() && used[assigned_pages[probe]] + spec.size_bytes > kHugepageBytes) ++probe;
      if (probe < assigned_pages.size()) cursor = probe;
    }

    const PhysAddr page = assigned_pages[cursor];
    const PhysAddr base = page + used[page];
    std::uint64_t remaining = spec.size_bytes;
    PhysAddr p = page;
    std::uint64_t offset = used[page];
    bool spans = false;
    for (;;) {
      const std::uint64_t take = std::min<std::uint64_t>(remaining, kHugepageBytes - offset);
      used[p] = offset + take;
      remaining -= take;
      if (remaining == 0) break;
      const PhysAddr next = p + kHugepageBytes;
      auto it = used.find(next);
      if (it == used.end() || it->second != 0) {
        throw Error("structure '" + spec.name + "' overflows page " + to_hex(p) +
                    " and the next physical page is not assigned and free");
      }
      spans = true;
      p = next;
      offset = 0;
    }
    placed.push_back({spec.name, base, spec.size_bytes, spec.elem_bytes, spans});
  }
  return BlockLayout(std::move(placed));
}

BlockLayout layout_matvec(std::uint64_t n_rows, std::uint64_t n_cols, std::uint64_t a_values,
                          std::uint32_t elem_bytes, std::span<const PhysAddr> assigned_pages) {
  const std::vector<StructureSpec> specs = {
      {"A", round_up_line(a_values * elem_bytes), elem_bytes, std::nullopt},
      {"y", round_up_line(n_rows * elem_bytes), elem_bytes, std::nullopt},
      {"x", round_up_line(n_cols * elem_bytes), elem_bytes, std::nullopt},
  };
  return layout_blocks(specs, assigned_pages);
}

namespace {
using nlohmann::json;
}

BlockLayout read_layout(std::istream& in, const std::string& source) {
  try {
    const json doc = json::parse(in);
    std::vector<PlacedStructure> out;
    for (const auto& s : doc.at("structures")) {
      PlacedStructure p;
      p.name = s.at("name").get<std::string>();
      p.base = parse_address(s.at("base").get<std::string>());
      p.size_bytes = s.at("size_bytes").get<std::uint64_t>();
      p.elem_bytes = s.at("elem_bytes").get<std::uint32_t>();
      p.spans_pages = (p.base / kHugepageBytes) != ((p.end() - 1) / kHugepageBytes) && p.size_bytes > 0;
      out.push_back(std::move(p));
    }
    return BlockLayout(std::move(out));
  } catch (const json::exception& e) {
    throw Error(source + ": " + e.what());
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
}

BlockLayout load_layout(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open layout " + path.string());
  return read_layout(in, path.string());
}

void write_layout(std::ostream& out, const BlockLayout& layout) {
  json arr = json::array();
  for (const auto& s : layout.structures()) {
    arr.push_back({{"name", s.name},
                   {"base", to_hex(s.base)},
                   {"size_bytes", s.size_bytes},
                   {"elem_bytes", s.elem_bytes},
                   {"spans_pages", s.spans_pages}});
  }
  json doc;
  doc["structures"] = arr;
  doc["pages"] = json::array();
  for (PhysAddr p : layout.pages()) doc["pages"].push_back(to_hex(p));
  out << doc.dump(2) << '\n';
}

}  // namespace cohmesh
