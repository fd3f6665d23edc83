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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cohmesh {

/// Physical byte address. Only bits 33:6 select the home CHA.
using PhysAddr = std::uint64_t;

inline constexpr PhysAddr kLineBytes = 64;
inline constexpr PhysAddr kGroupBytes = 4 * kLineBytes;    // one line per quadrant
inline constexpr PhysAddr kWindowBytes = 32 * kGroupBytes; // 8 KiB, one packed offset word
inline constexpr unsigned kLowestMaskBit = 6;
inline constexpr unsigned kHighestMaskBit = 33;
inline constexpr unsigned kMaskWidth = kHighestMaskBit - kLowestMaskBit + 1;  // 28
inline constexpr std::uint64_t kMaskableBits = ((std::uint64_t{1} << kMaskWidth) - 1)
                                               << kLowestMaskBit;
inline constexpr unsigned kMaxChaBits = 16;

constexpr PhysAddr line_base(PhysAddr addr) { return addr & ~(kLineBytes - 1); }

struct ChaId {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(ChaId, ChaId) = default;
};

/// Mesh quadrant named by the two low CHA bits: bit 1 is c1, bit 0 is c0.
struct Quadrant {
  std::uint8_t id = 0;

  static constexpr Quadrant of(ChaId cha) { return Quadrant{static_cast<std::uint8_t>(cha.index & 3u)}; }
  static constexpr Quadrant of_index(std::uint32_t raw) { return Quadrant{static_cast<std::uint8_t>(raw & 3u)}; }
  constexpr unsigned c0() const { return id & 1u; }
  constexpr unsigned c1() const { return (id >> 1) & 1u; }

  friend constexpr auto operator<=>(Quadrant, Quadrant) = default;
};

inline constexpr std::size_t kNumQuadrants = 4;

/// Affine XOR mapping from physical address to CHA index. Bit b of the index
/// is the parity of (addr & mask(b)) XOR constant(b). Immutable once built.
class XorMaskSet {
 public:
  /// masks[b] may only contain bit positions 6..33; throws cohmesh::Error otherwise.
  XorMaskSet(std::uint32_t num_chas, std::vector<std::uint64_t> masks, std::uint32_t constants);

  /// All masks and constants zero.
  static XorMaskSet zero(unsigned num_cha_bits, std::uint32_t num_chas);
  /// Two-bit set with mask_0 = {6}, mask_1 = {6, 7}.
  static XorMaskSet minimal_quadrant();
  /// Random masks over bits 6..33 and random constants, then patched so that
  /// bit 6 feeds c0 and c1 and bit 7 feeds c1 only. Deterministic per seed.
  static XorMaskSet random_quadrant_valid(std::uint64_t seed, unsigned num_cha_bits = 6,
                                          std::uint32_t num_chas = 38);

  unsigned num_cha_bits() const { return static_cast<unsigned>(masks_.size()); }
  std::uint32_t num_chas() const { return num_chas_; }
  std::uint64_t mask(unsigned bit) const { return masks_.at(bit); }
  bool constant(unsigned bit) const { return ((constants_ >> bit) & 1u) != 0; }
  std::uint32_t constants() const { return constants_; }
  std::span<const std::uint64_t> masks() const { return masks_; }

  /// CHA index before the num_chas check; may be >= num_chas.
  std::uint32_t raw_index(PhysAddr addr) const;
  /// Same mapping with every constant cleared.
  std::uint32_t linear_index(PhysAddr addr) const;
  bool is_mapped(std::uint32_t raw) const { return raw < num_chas_; }

  /// +64 B flips both c0 and c1 and +128 B flips exactly one of them, so each
  /// 256 B group holds one line per quadrant.
  bool quadrant_valid() const;

  /// Linear CHA-bit delta contributed by address bits 12:6, indexed by
  /// (addr >> 6) & 127.
  std::uint32_t window_delta(unsigned line_in_window) const { return window_delta_[line_in_window & 127u]; }

  friend bool operator==(const XorMaskSet& a, const XorMaskSet& b) {
    return a.num_chas_ == b.num_chas_ && a.constants_ == b.constants_ && a.masks_ == b.masks_;
  }

 private:
  std::uint32_t num_chas_;
  std::uint32_t constants_;
  std::vector<std::uint64_t> masks_;
  std::array<std::uint32_t, 128> window_delta_{};
};

/// nullopt when the XOR model lands on an index >= num_chas.
std::optional<ChaId> cha_of_addr(PhysAddr addr, const XorMaskSet& map);

Quadrant quadrant_of_addr(PhysAddr addr, const XorMaskSet& map);

/// Quadrants of the four lines of a 256 B group, in address order.
/// Throws NotQuadrantValid if they are not pairwise distinct.
std::array<Quadrant, 4> quadrant_group_cycle(PhysAddr group_base, const XorMaskSet& map);

/// Positions (0..3) of the lines belonging to one quadrant inside the 32
/// groups of an 8 KiB window. Group g's position sits at bits [2g+1:2g].
struct OffsetWindow {
  PhysAddr window_base = 0;
  Quadrant quadrant;
  std::uint64_t packed = 0;

  unsigned position(unsigned group) const { return static_cast<unsigned>((packed >> (2 * group)) & 3u); }
  PhysAddr line(unsigned group) const { return window_base + kGroupBytes * group + kLineBytes * position(group); }
};

/// Uses one full mapping evaluation; the other groups come from the delta table.
OffsetWindow offset_window(PhysAddr window_base, Quadrant q, const XorMaskSet& map);

struct WalkResult {
  std::vector<PhysAddr> lines;
  std::size_t full_evaluations = 0;
};

/// Lines of [range_start, range_start + range_len) in quadrant q, ascending.
/// Both ends must be 256 B aligned.
WalkResult quadrant_walk(PhysAddr range_start, std::uint64_t range_len, Quadrant q,
                         const XorMaskSet& map);

struct QuadrantHistogram {
  std::vector<std::uint64_t> per_cha;  // indexed by raw CHA index, 2^num_cha_bits entries
  std::array<std::uint64_t, kNumQuadrants> per_quadrant{};
  std::uint64_t unmapped = 0;
  std::uint64_t total_lines = 0;

  /// max/min line count over mapped CHAs; infinity if some mapped CHA got none.
  double cha_spread(std::uint32_t num_chas) const;
};

QuadrantHistogram quadrant_histogram(PhysAddr range_start, std::uint64_t range_len,
                                     const XorMaskSet& map);

}  // namespace cohmesh
