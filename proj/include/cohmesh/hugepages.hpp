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
#include <span>
#include <vector>

#include "cohmesh/address_mapping.hpp"

namespace cohmesh {

inline constexpr PhysAddr kHugepageBytes = PhysAddr{1} << 30;
inline constexpr unsigned kMcdramPages = 16;

/// 1 GiB pages handed to the process, in the order the allocator returned
/// them. Bases are k * 2^30 for distinct k < 16.
struct HugepagePool {
  std::vector<PhysAddr> pages;
};

/// Stand-in for overallocating hugepages and reading their physical bases:
/// a seeded permutation of `available` of the 16 MCDRAM pages.
HugepagePool emulate_hugepage_pool(std::uint64_t seed, unsigned available);

struct PinResult {
  std::vector<PhysAddr> assigned;  // same order as the required list
  std::vector<PhysAddr> freed;     // pool pages nobody asked for, in pool order
};

/// Matches each required base to the identical pool page and releases the
/// rest. Throws cohmesh::Error naming the first base the pool lacks.
PinResult assign_hugepages(std::span<const PhysAddr> required, const HugepagePool& pool);

}  // namespace cohmesh
