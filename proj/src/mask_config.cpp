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

#include "cohmesh/mask_config.hpp"

#include <fstream>
#include <json.hpp>

#include "cohmesh/error.hpp"

namespace cohmesh {

using nlohmann::json;

XorMaskSet read_mask_config(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(source + ": " + e.what());
  }
  try {
    const auto num_chas = doc.at("num_chas").get<std::uint32_t>();
    const auto num_bits = doc.at("num_cha_bits").get<unsigned>();
    const auto& bits = doc.at("bits");
    if (!bits.is_array() || bits.size() != num_bits) {
      throw Error(source + ": \"bits\" must list exactly num_cha_bits entries");
    }
    std::vector<std::uint64_t> masks(num_bits, 0);
    std::uint32_t constants = 0;
    for (unsigned b = 0; b < num_bits; ++b) {
      for (const auto& p : bits[b].at("positions")) {
        const auto pos = p.get<unsigned>();
        if (pos < kLowestMaskBit || pos > kHighestMaskBit) {
          throw Error(source + ": CHA bit " + std::to_string(b) + " uses address bit " +
                      std::to_string(pos) + ", outside 6..33");
        }
        masks[b] |= std::uint64_t{1} << pos;
      }
      const auto c = bits[b].value("constant", 0);
      if (c != 0 && c != 1) throw Error(source + ": constant must be 0 or 1");
      constants |= static_cast<std::uint32_t>(c) << b;
    }
    return XorMaskSet(num_chas, std::move(masks), constants);
  } catch (const json::exception& e) {
    throw Error(source + ": " + e.what());
  }
}

XorMaskSet load_mask_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mask config " + path.string());
  return read_mask_config(in, path.string());
}

void write_mask_config(std::ostream& out, const XorMaskSet& map, const std::string& comment) {
  json doc;
  if (!comment.empty()) doc["comment"] = comment;
  doc["num_chas"] = map.num_chas();
  doc["num_cha_bits"] = map.num_cha_bits();
  json bits = json::array();
  for (unsigned b = 0; b < map.num_cha_bits(); ++b) {
    json positions = json::array();
    for (unsigned p = kLowestMaskBit; p <= kHighestMaskBit; ++p) {
      if ((map.mask(b) >> p) & 1u) positions.push_back(p);
    }
    bits.push_back({{"positions", positions}, {"constant", map.constant(b) ? 1 : 0}});
  }
  doc["bits"] = bits;
  out << doc.dump(2) << '\n';
}

void save_mask_config(const std::filesystem::path& path, const XorMaskSet& map, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_mask_config(out, map, comment);
}

}  // namespace cohmesh
