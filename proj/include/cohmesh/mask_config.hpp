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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cohmesh/address_mapping.hpp"

namespace cohmesh {

// Mask-set config file, JSON:
//
//   {
//     "num_chas": 38,
//     "num_cha_bits": 6,
//     "bits": [ { "positions": [6, 9, 13], "constant": 0 }, ... ]
//   }
//
// bits[b] describes CHA index bit b. An optional "comment" string is kept
// for humans and ignored on read.

XorMaskSet read_mask_config(std::istream& in, const std::string& source = "<stream>");
XorMaskSet load_mask_config(const std::filesystem::path& path);

void write_mask_config(std::ostream& out, const XorMaskSet& map, const std::string& comment = {});
void save_mask_config(const std::filesystem::path& path, const XorMaskSet& map,
                      const std::string& comment = {});

}  // namespace cohmesh
