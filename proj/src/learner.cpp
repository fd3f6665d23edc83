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

#include "cohmesh/learner.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "cohmesh/error.hpp"
#include "cohmesh/gf2.hpp"
#include "cohmesh/hex.hpp"

namespace cohmesh {

namespace {

// Unknown v < 28 is address bit v + 6; unknown 28 is the affine constant.
constexpr unsigned kConstVar = kMaskWidth;
constexpr unsigned kNumUnknowns = kMaskWidth + 1;

std::uint64_t equation_of(PhysAddr addr) {
  return ((addr & kMaskableBits) >> kLowestMaskBit) | (std::uint64_t{1} << kConstVar);
}

struct BitSolve {
  std::uint64_t solution = 0;
  std::size_t residual = 0;
  Gf2System system{kNumUnknowns};
};

BitSolve solve_in_order(std::span<const Sample> samples, std::span<const std::size_t> order, unsigned bit) {
  BitSolve out;
  for (std::size_t i : order) {
    const bool rhs = (samples[i].cha.index >> bit) & 1u;
    if (out.system.add(equation_of(samples[i].addr), rhs) == Gf2System::Outcome::kInconsistent) {
      ++out.residual;
    }
  }
  out.solution = out.system.solve();
  return out;
}

}  // namespace

std::size_t LearnResult::total_residual() const {
  std::size_t n = 0;
  for (const auto& b : bits) n += b.residual;
  return n;
}

bool LearnResult::fully_determined() const {
  return std::all_of(bits.begin(), bits.end(), [](const BitReport& b) { return b.rank == kNumUnknowns; });
}

std::vector<Sample> synth_samples(const XorMaskSet& planted, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  out.reserve(n);
  const std::size_t max_draws = 64 * n + 4096;
  for (std::size_t draws = 0; out.size() < n; ++draws) {
    if (draws == max_draws) throw Error("planted mask set leaves almost every address unmapped");
    const PhysAddr addr = rng() & kMaskableBits;
    if (auto cha = cha_of_addr(addr, planted)) out.push_back({addr, *cha});
  }
  return out;
}

std::vector<Sample> samples_at(const XorMaskSet& planted, std::span<const PhysAddr> addrs) {
  std::vector<Sample> out;
  out.reserve(addrs.size());
  for (PhysAddr a : addrs) {
    auto cha = cha_of_addr(a, planted);
    if (!cha) throw Error("address " + to_hex(a) + " is unmapped under the planted set");
    out.push_back({a, *cha});
  }
  return out;
}

LearnResult learn_xor_masks(std::span<const Sample> samples, unsigned num_cha_bits, const LearnOptions& opts) {
  if (samples.empty()) throw Error("learn_xor_masks needs at least one sample");
  if (num_cha_bits == 0 || num_cha_bits > kMaxChaBits) throw Error("num_cha_bits out of range");
  for (const auto& s : samples) {
    if ((s.cha.index >> num_cha_bits) != 0) {
      throw Error("sample at " + to_hex(s.addr) + " reports CHA " + std::to_string(s.cha.index) +
                  ", which needs more than " + std::to_string(num_cha_bits) + " bits");
    }
  }

  std::vector<std::size_t> identity(samples.size());
  std::iota(identity.begin(), identity.end(), std::size_t{0});

  std::vector<std::uint64_t> masks(num_cha_bits, 0);
  std::uint32_t constants = 0;
  std::vector<BitReport> reports(num_cha_bits);

  for (unsigned b = 0; b < num_cha_bits; ++b) {
    BitSolve best = solve_in_order(samples, identity, b);
    if (best.residual > 0) {
      std::mt19937_64 rng(opts.seed ^ (0x9e3779b97f4a7c15ULL * (b + 1)));
      std::vector<std::size_t> order = identity;
      for (unsigned r = 0; r < opts.restarts && best.residual > 0; ++r) {
        // Fisher-Yates on raw engine output keeps the shuffle portable.
        for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);
        BitSolve cand = solve_in_order(samples, order, b);
        if (cand.residual < best.residual) best = std::move(cand);
      }
    }

    masks[b] = (best.solution & ((std::uint64_t{1} << kMaskWidth) - 1)) << kLowestMaskBit;
    if ((best.solution >> kConstVar) & 1u) constants |= 1u << b;

    auto& rep = reports[b];
    rep.residual = best.residual;
    rep.rank = best.system.rank();
    const std::uint64_t free = best.system.free_vars();
    for (unsigned v = 0; v < kMaskWidth; ++v) {
      if ((free >> v) & 1u) rep.free_positions.push_back(v + kLowestMaskBit);
    }
    rep.constant_free = (free >> kConstVar) & 1u;
  }

  const std::uint32_t num_chas = opts.num_chas.value_or(std::uint32_t{1} << num_cha_bits);
  return LearnResult{XorMaskSet(num_chas, std::move(masks), constants), std::move(reports)};
}

std::size_t verify_masks(const XorMaskSet& map, std::span<const Sample> samples) {
  return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [&](const Sample& s) {
    const auto got = cha_of_addr(s.addr, map);
    return !got || *got != s.cha;
  }));
}

std::vector<Sample> read_samples_csv(std::istream& in, const std::string& source) {
  std::vector<Sample> out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "addr,cha") throw ParseError(source, lineno, "expected header 'addr,cha'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(source, lineno, "expected 'addr,cha'");
    try {
      const PhysAddr addr = parse_address(line.substr(0, comma));
      const std::uint64_t cha = parse_address(line.substr(comma + 1));
      if (cha > UINT32_MAX) throw Error("CHA index too large");
      out.push_back({addr, ChaId{static_cast<std::uint32_t>(cha)}});
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(source, lineno, e.what());
    }
  }
  if (!header_seen) throw ParseError(source, lineno, "missing header 'addr,cha'");
  return out;
}

std::vector<Sample> load_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open sample file " + path.string());
  return read_samples_csv(in, path.string());
}

void write_samples_csv(std::ostream& out, std::span<const Sample> samples) {
  out << "addr,cha\n";
  for (const auto& s : samples) out << to_hex(s.addr) << ',' << s.cha.index << '\n';
}

void write_learn_report(std::ostream& out, const LearnResult& result) {
  out << "# cha_bit residual rank free_positions constant_free\n";
  for (std::size_t b = 0; b < result.bits.size(); ++b) {
    const auto& r = result.bits[b];
    out << b << ' ' << r.residual << ' ' << r.rank << ' ';
    if (r.free_positions.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < r.free_positions.size(); ++i) out << (i ? "," : "") << r.free_positions[i];
    }
    out << ' ' << (r.constant_free ? "yes" : "no") << '\n';
  }
  out << "# total_residual " << result.total_residual() << '\n';
  out << "# fully_determined " << (result.fully_determined() ? "yes" : "no") << '\n';
}

}  // namespace cohmesh
