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
#include <cstdint>

namespace cohmesh {

/// Incremental echelon basis for an affine system over GF(2) with at most 64
/// unknowns. Each equation is a coefficient word plus a right-hand-side bit;
/// variable v is bit v of the word. Rows are kept with their highest set bit
/// as pivot.
class Gf2System {
 public:
  enum class Outcome { kAdded, kRedundant, kInconsistent };

  explicit Gf2System(unsigned num_vars);

  /// Inconsistent equations are reported and dropped, so the kept rows always
  /// have a solution.
  Outcome add(std::uint64_t coeffs, bool rhs);

  unsigned num_vars() const { return num_vars_; }
  unsigned rank() const;
  std::uint64_t pivots() const { return pivots_; }
  std::uint64_t free_vars() const { return all_vars() & ~pivots_; }

  /// One solution of the kept rows; free variables are 0.
  std::uint64_t solve() const;

 private:
  std::uint64_t all_vars() const {
    return num_vars_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << num_vars_) - 1;
  }

  unsigned num_vars_;
  std::uint64_t pivots_ = 0;
  std::uint64_t rhs_ = 0;
  std::array<std::uint64_t, 64> rows_{};
};

}  // namespace cohmesh
