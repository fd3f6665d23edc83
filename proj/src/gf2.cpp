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

#include "cohmesh/gf2.hpp"

#include <bit>

#include "cohmesh/error.hpp"

namespace cohmesh {

Gf2System::Gf2System(unsigned num_vars) : num_vars_(num_vars) {
  if (num_vars == 0 || num_vars > 64) throw Error("Gf2System supports 1..64 unknowns");
}

Gf2System::Outcome Gf2System::add(std::uint64_t coeffs, bool rhs) {
  if ((coeffs & ~all_vars()) != 0) throw Error("equation references unknowns beyond num_vars");
  std::uint64_t b = rhs ? 1 : 0;
  while (coeffs != 0) {
    const unsigned p = 63u - static_cast<unsigned>(std::countl_zero(coeffs));
    const std::uint64_t pbit = std::uint64_t{1} << p;
    if ((pivots_ & pbit) == 0) {
      rows_[p] = coeffs;
      pivots_ |= pbit;
      rhs_ = (rhs_ & ~pbit) | (b << p);
      return Outcome::kAdded;
    }
    coeffs ^= rows_[p];
    b ^= (rhs_ >> p) & 1u;
  }
  return b == 0 ? Outcome::kRedundant : Outcome::kInconsistent;
}

unsigned Gf2System::rank() const { return static_cast<unsigned>(std::popcount(pivots_)); }

std::uint64_t Gf2System::solve() const {
  // Non-pivot bits of a row sit below its pivot, so ascending order sees
  // every dependency already resolved.
  std::uint64_t x = 0;
  for (std::uint64_t rest = pivots_; rest != 0; rest &= rest - 1) {
    const unsigned p = static_cast<unsigned>(std::countr_zero(rest));
    const std::uint64_t pbit = std::uint64_t{1} << p;
    const unsigned v = ((rhs_ >> p) & 1u) ^ (std::popcount(rows_[p] & ~pbit & x) & 1u);
    if (v) x |= pbit;
  }
  return x;
}

}  // namespace cohmesh
