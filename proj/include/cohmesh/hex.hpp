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

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "cohmesh/error.hpp"

namespace cohmesh {

inline std::string to_hex(std::uint64_t v) {
  char buf[2 + 16];
  buf[0] = '0';
  buf[1] = 'x';
  const auto r = std::to_chars(buf + 2, buf + sizeof buf, v, 16);
  return std::string(buf, r.ptr);
}

/// Accepts "0x"-prefixed hex (underscores allowed as digit separators) or
/// plain decimal.
inline std::uint64_t parse_address(std::string_view text) {
  std::string digits;
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  for (char c : text) {
    if (c != '_') digits.push_back(c);
  }
  std::uint64_t v = 0;
  const auto r = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
  if (digits.empty() || r.ec != std::errc{} || r.ptr != digits.data() + digits.size()) {
    throw Error("bad address literal '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace cohmesh
