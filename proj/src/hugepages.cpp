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

#include "cohmesh/hugepages.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <set>

#include "cohmesh/error.hpp"
#include "cohmesh/hex.hpp"

namespace cohmesh {

HugepagePool emulate_hugepage_pool(std::uint64_t seed, unsigned available) {
  if (available < 1 || available > kMcdramPages) {
    throw Error("available hugepages must be in 1..16, got " + std::to_string(available));
  }
  std::array<unsigned, kMcdramPages> k{};
  std::iota(k.begin(), k.end(), 0u);
  std::mt19937_64 rng(seed);
  for (std::size_t i = k.size() - 1; i > 0; --i) std::swap(k[i], k[rng() % (i + 1)]);
  HugepagePool pool;
  for (unsigned i = 0; i < available; ++i) pool.pages.push_back(k[i] * kHugepageBytes);
  return pool;
}

PinResult assign_hugepages(std::span<const PhysAddr> required, const HugepagePool& pool) {
  std::set<PhysAddr> wanted;
  for (PhysAddr base : required) {
    if (base % kHugepageBytes != 0) throw Error("required page " + to_hex(base) + " is not 1 GiB aligned");
    if (!wanted.insert(base).second) throw Error("required page " + to_hex(base) + " listed twice");
  }
  const std::set<PhysAddr> have(pool.pages.begin(), pool.pages.end());
  PinResult out;
  for (PhysAddr base : required) {
    if (!have.count(base)) {
      throw Error("hugepage " + to_hex(base) + " was not handed out; release the pool and retry");
    }
    out.assigned.push_back(base);
  }
  for (PhysAddr p : pool.pages) {
    if (!wanted.count(p)) out.freed.push_back(p);
  }
  return out;
}

}  // namespace cohmesh
