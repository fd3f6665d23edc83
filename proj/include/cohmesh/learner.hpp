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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cohmesh/address_mapping.hpp"

namespace cohmesh {

/// One observation: a line address and the CHA that answered for it.
struct Sample {
  PhysAddr addr = 0;
  ChaId cha;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Per CHA-bit outcome of the GF(2) solve.
struct BitReport {
  std::size_t residual = 0;  // samples the recovered bit does not reproduce
  unsigned rank = 0;         // out of 29 unknowns (28 mask bits + constant)
  std::vector<unsigned> free_positions;  // undetermined address bits, set to 0
  bool constant_free = false;
};

struct LearnResult {
  XorMaskSet recovered;
  std::vector<BitReport> bits;

  std::size_t total_residual() const;
  /// Every bit had full rank, so the recovered set is the unique affine fit.
  bool fully_determined() const;
};

struct LearnOptions {
  std::optional<std::uint32_t> num_chas;  // defaults to 2^num_cha_bits
  /// Extra seeded sample orderings tried when a bit is inconsistent; the
  /// ordering with the smallest residual wins.
  unsigned restarts = 8;
  std::uint64_t seed = 0;
};

/// n samples with uniform random address bits 33:6. Addresses the planted set
/// leaves unmapped are redrawn, since hardware never reports them.
std::vector<Sample> synth_samples(const XorMaskSet& planted, std::size_t n, std::uint64_t seed);

/// Samples at the given addresses; throws if one of them is unmapped.
std::vector<Sample> samples_at(const XorMaskSet& planted, std::span<const PhysAddr> addrs);

LearnResult learn_xor_masks(std::span<const Sample> samples, unsigned num_cha_bits,
                            const LearnOptions& opts = {});

std::size_t verify_masks(const XorMaskSet& map, std::span<const Sample> samples);

// Sample CSV: header "addr,cha", addr as 0x-prefixed hex, cha decimal.
std::vector<Sample> read_samples_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<Sample> load_samples_csv(const std::filesystem::path& path);
void write_samples_csv(std::ostream& out, std::span<const Sample> samples);

/// Human-readable residual and free-variable report.
void write_learn_report(std::ostream& out, const LearnResult& result);

}  // namespace cohmesh
