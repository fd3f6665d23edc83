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

#include "cohmesh/address_mapping.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <random>
#include <sstream>

#include "cohmesh/error.hpp"

namespace cohmesh {

namespace {

constexpr std::uint64_t bit_at(unsigned pos) { return std::uint64_t{1} << pos; }

std::uint32_t parity_index(std::span<const std::uint64_t> masks, PhysAddr addr) {
  std::uint32_t index = 0;
  for (unsigned b = 0; b < masks.size(); ++b) {
    index |= static_cast<std::uint32_t>(std::popcount(addr & masks[b]) & 1) << b;
  }
  return index;
}

std::string hex(PhysAddr a) {
  std::ostringstream os;
  os << "0x" << std::hex << a;
  return os.str();
}

void require_quadrant_valid(const XorMaskSet& map) {
  if (!map.quadrant_valid()) {
    throw NotQuadrantValid("mask set is not quadrant-valid: bit 6 must feed c0 and c1, bit 7 exactly one of them");
  }
}

}  // namespace

XorMaskSet::XorMaskSet(std::uint32_t num_chas, std::vector<std::uint64_t> masks, std::uint32_t constants)
    : num_chas_(num_chas), constants_(constants), masks_(std::move(masks)) {
  if (masks_.empty() || masks_.size() > kMaxChaBits) {
    throw Error("mask set needs between 1 and " + std::to_string(kMaxChaBits) + " CHA bits");
  }
  if (num_chas_ == 0 || num_chas_ > (std::uint64_t{1} << masks_.size())) {
    throw Error("num_chas " + std::to_string(num_chas_) + " does not fit in " +
                std::to_string(masks_.size()) + " CHA bits");
  }
  for (std::size_t b = 0; b < masks_.size(); ++b) {
    if ((masks_[b] & ~kMaskableBits) != 0) {
      throw Error("mask for CHA bit " + std::to_string(b) + " references bits outside 33:6");
    }
  }
  if ((constants_ >> masks_.size()) != 0) {
    throw Error("constant word has bits above num_cha_bits");
  }
  for (unsigned i = 0; i < window_delta_.size(); ++i) {
    window_delta_[i] = parity_index(masks_, static_cast<PhysAddr>(i) << kLowestMaskBit);
  }
}

XorMaskSet XorMaskSet::zero(unsigned num_cha_bits, std::uint32_t num_chas) {
  return XorMaskSet(num_chas, std::vector<std::uint64_t>(num_cha_bits, 0), 0);
}

XorMaskSet XorMaskSet::minimal_quadrant() {
  return XorMaskSet(4, {bit_at(6), bit_at(6) | bit_at(7)}, 0);
}

XorMaskSet XorMaskSet::random_quadrant_valid(std::uint64_t seed, unsigned num_cha_bits,
                                             std::uint32_t num_chas) {
  if (num_cha_bits < 2) throw Error("a quadrant-valid mask set needs at least 2 CHA bits");
  // Raw engine output only: distributions are implementation-defined.
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> masks(num_cha_bits);
  for (auto& m : masks) m = rng() & kMaskableBits;
  const auto constants = static_cast<std::uint32_t>(rng() & ((std::uint64_t{1} << num_cha_bits) - 1));
  masks[0] = (masks[0] | bit_at(6)) & ~bit_at(7);
  masks[1] = masks[1] | bit_at(6) | bit_at(7);
  return XorMaskSet(num_chas, std::move(masks), constants);
}

std::uint32_t XorMaskSet::raw_index(PhysAddr addr) const {
  return parity_index(masks_, addr) ^ constants_;
}

std::uint32_t XorMaskSet::linear_index(PhysAddr addr) const { return parity_index(masks_, addr); }

bool XorMaskSet::quadrant_valid() const {
  if (masks_.size() < 2) return false;
  const bool six_feeds_both = (masks_[0] & bit_at(6)) && (masks_[1] & bit_at(6));
  const bool seven_feeds_one = ((masks_[0] & bit_at(7)) != 0) != ((masks_[1] & bit_at(7)) != 0);
  return six_feeds_both && seven_feeds_one;
}

std::optional<ChaId> cha_of_addr(PhysAddr addr, const XorMaskSet& map) {
  const std::uint32_t raw = map.raw_index(addr);
  if (!map.is_mapped(raw)) return std::nullopt;
  return ChaId{raw};
}

Quadrant quadrant_of_addr(PhysAddr addr, const XorMaskSet& map) {
  return Quadrant::of_index(map.raw_index(addr));
}

std::array<Quadrant, 4> quadrant_group_cycle(PhysAddr group_base, const XorMaskSet& map) {
  if (group_base % kGroupBytes != 0) {
    throw Error("group base " + hex(group_base) + " is not 256 B aligned");
  }
  std::array<Quadrant, 4> cycle;
  unsigned seen = 0;
  for (unsigned i = 0; i < 4; ++i) {
    cycle[i] = quadrant_of_addr(group_base + kLineBytes * i, map);
    seen |= 1u << cycle[i].id;
  }
  if (seen != 0xFu) {
    throw NotQuadrantValid("group at " + hex(group_base) + " does not cover all four quadrants");
  }
  return cycle;
}

OffsetWindow offset_window(PhysAddr window_base, Quadrant q, const XorMaskSet& map) {
  if (window_base % kWindowBytes != 0) {
    throw Error("window base " + hex(window_base) + " is not 8 KiB aligned");
  }
  require_quadrant_valid(map);
  // Bits 12:6 of window_base are zero, so cha(base + off) = cha(base) ^ delta(off).
  const unsigned base_quadrant = map.raw_index(window_base) & 3u;
  OffsetWindow w{window_base, q, 0};
  for (unsigned g = 0; g < 32; ++g) {
    for (unsigned pos = 0; pos < 4; ++pos) {
      if (((base_quadrant ^ map.window_delta(4 * g + pos)) & 3u) == q.id) {
        w.packed |= static_cast<std::uint64_t>(pos) << (2 * g);
        break;
      }
    }
  }
  return w;
}

WalkResult quadrant_walk(PhysAddr range_start, std::uint64_t range_len, Quadrant q,
                         const XorMaskSet& map) {
  if (range_start % kGroupBytes != 0 || range_len % kGroupBytes != 0) {
    throw Error("walk range must start and end on 256 B boundaries");
  }
  WalkResult out;
  if (range_len == 0) return out;
  require_quadrant_valid(map);

  const PhysAddr end = range_start + range_len;
  out.lines.reserve(range_len / kGroupBytes);
  for (PhysAddr wbase = range_start & ~(kWindowBytes - 1); wbase < end; wbase += kWindowBytes) {
    const OffsetWindow w = offset_window(wbase, q, map);
    ++out.full_evaluations;
    const unsigned first = wbase < range_start ? static_cast<unsigned>((range_start - wbase) / kGroupBytes) : 0;
    const unsigned last = std::min<PhysAddr>(32, (end - wbase + kGroupBytes - 1) / kGroupBytes);
    for (unsigned g = first; g < last; ++g) out.lines.push_back(w.line(g));
  }
  return out;
}

QuadrantHistogram quadrant_histogram(PhysAddr range_start, std::uint64_t range_len,
                                     const XorMaskSet& map) {
  if (range_start % kLineBytes != 0 || range_len % kLineBytes != 0) {
    throw Error("histogram range must be 64 B aligned");
  }
  QuadrantHistogram h;
  h.per_cha.assign(std::size_t{1} << map.num_cha_bits(), 0);
  for (PhysAddr a = range_start; a < range_start + range_len; a += kLineBytes) {
    const std::uint32_t raw = map.raw_index(a);
    ++h.per_cha[raw];
    ++h.per_quadrant[raw & 3u];
    if (!map.is_mapped(raw)) ++h.unmapped;
  }
  h.total_lines = range_len / kLineBytes;
  return h;
}

double QuadrantHistogram::cha_spread(std::uint32_t num_chas) const {
  const auto n = std::min<std::size_t>(num_chas, per_cha.size());
  if (n == 0) return 0.0;
  const auto [lo, hi] = std::minmax_element(per_cha.begin(), per_cha.begin() + static_cast<std::ptrdiff_t>(n));
  if (*lo == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(*hi) / static_cast<double>(*lo);
}

}  // namespace cohmesh
