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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cohmesh/address_mapping.hpp"
#include "cohmesh/error.hpp"
#include "cohmesh/hex.hpp"
#include "cohmesh/hugepages.hpp"
#include "cohmesh/layout.hpp"
#include "cohmesh/learner.hpp"
#include "cohmesh/mask_config.hpp"
#include "cohmesh/matrix_market.hpp"
#include "cohmesh/mesh.hpp"
#include "cohmesh/schedule_io.hpp"
#include "cohmesh/schedulers.hpp"
#include "cohmesh/simulator.hpp"

using namespace cohmesh;

namespace {

struct Globals {
  std::uint64_t seed = 42;
  std::string mask_config;
  std::string mesh_config;
  std::string out;
  std::uint32_t max_width = kDefaultMaxWidth;
};

/// stdout unless --out names a file.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Error("cannot open " + path + " for writing");
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

XorMaskSet masks_from(const Globals& g) {
  return g.mask_config.empty() ? XorMaskSet::random_quadrant_valid(g.seed) : load_mask_config(g.mask_config);
}

MeshConfig mesh_from(const Globals& g) {
  return g.mesh_config.empty() ? MeshConfig::knl_default() : load_mesh_config(g.mesh_config);
}

PhysAddr addr_arg(const std::string& s) { return parse_address(s); }

std::vector<PhysAddr> addr_args(const std::vector<std::string>& v) {
  std::vector<PhysAddr> out;
  for (const auto& s : v) out.push_back(parse_address(s));
  return out;
}

std::vector<PhysAddr> all_pages_ascending() {
  std::vector<PhysAddr> p;
  for (unsigned k = 0; k < kMcdramPages; ++k) p.push_back(PhysAddr{k} * kHugepageBytes);
  return p;
}

void cmd_map(const Globals& g, const std::string& start_s, const std::string& len_s, bool histogram) {
  const auto map = masks_from(g);
  const PhysAddr start = addr_arg(start_s);
  const std::uint64_t len = addr_arg(len_s);
  Output out(g.out);
  auto& os = out.get();
  if (histogram) {
    const auto h = quadrant_histogram(start, len, map);
    os << "kind,index,lines\n";
    for (unsigned q = 0; q < kNumQuadrants; ++q) os << "quadrant," << q << ',' << h.per_quadrant[q] << '\n';
    for (std::size_t c = 0; c < h.per_cha.size(); ++c) os << "cha," << c << ',' << h.per_cha[c] << '\n';
    os << "unmapped,," << h.unmapped << '\n';
    return;
  }
  if (start % kLineBytes != 0 || len % kLineBytes != 0) throw Error("map range must be 64 B aligned");
  os << "addr,cha,quadrant,mapped\n";
  for (PhysAddr a = start; a < start + len; a += kLineBytes) {
    const auto raw = map.raw_index(a);
    os << to_hex(a) << ',' << raw << ',' << (raw & 3u) << ',' << (map.is_mapped(raw) ? 1 : 0) << '\n';
  }
}

void cmd_samples(const Globals& g, std::size_t count) {
  const auto map = masks_from(g);
  Output out(g.out);
  write_samples_csv(out.get(), synth_samples(map, count, g.seed));
}

void cmd_learn(const Globals& g, const std::string& samples, unsigned bits, std::optional<std::uint32_t> num_chas,
               unsigned restarts, const std::string& report) {
  const auto s = load_samples_csv(samples);
  LearnOptions opts;
  opts.num_chas = num_chas;
  opts.restarts = restarts;
  opts.seed = g.seed;
  const auto r = learn_xor_masks(s, bits, opts);
  {
    Output out(g.out);
    write_mask_config(out.get(), r.recovered, "learned from " + samples);
  }
  if (report.empty()) {
    write_learn_report(std::cerr, r);
  } else {
    Output rep(report);
    write_learn_report(rep.get(), r);
  }
}

void cmd_gen_masks(const Globals& g, unsigned bits, std::uint32_t num_chas) {
  Output out(g.out);
  write_mask_config(out.get(), XorMaskSet::random_quadrant_valid(g.seed, bits, num_chas),
                    "random quadrant-valid mask set, seed " + std::to_string(g.seed));
}

void cmd_gen_mesh(const Globals& g) {
  Output out(g.out);
  write_mesh_config(out.get(), MeshConfig::knl_default());
}

struct ScheduleArgs {
  std::string matrix;
  std::string dense;
  std::string scheduler = "greedy";
  std::uint32_t elem_bytes = 8;
  std::vector<std::string> pages;
  std::string layout_out;
};

void cmd_schedule(const Globals& g, const ScheduleArgs& a) {
  if (a.matrix.empty() == a.dense.empty()) throw Error("give exactly one of --matrix or --dense");
  const auto map = masks_from(g);
  const auto mesh = mesh_from(g);
  mesh.validate();
  const auto pages = a.pages.empty() ? all_pages_ascending() : addr_args(a.pages);

  std::uint32_t rows = 0, cols = 0;
  std::vector<Statement> stmts;
  std::uint64_t a_values = 0;
  if (!a.dense.empty()) {
    const auto x = a.dense.find('x');
    if (x == std::string::npos) throw Error("--dense expects ROWSxCOLS, got '" + a.dense + "'");
    rows = static_cast<std::uint32_t>(std::stoul(a.dense.substr(0, x)));
    cols = static_cast<std::uint32_t>(std::stoul(a.dense.substr(x + 1)));
    a_values = std::uint64_t{rows} * cols;
    if (a.scheduler != "subnuma") stmts = dense_line_statements(rows, cols, a.elem_bytes);
  } else {
    const auto m = load_matrix_market(a.matrix);
    rows = m.n_rows;
    cols = m.n_cols;
    a_values = m.nnz();
    stmts = mine_regular_statements(m, g.max_width);
  }
  const auto layout = layout_matvec(rows, cols, a_values, a.elem_bytes, pages);

  Schedule sched;
  if (a.scheduler == "sequential") {
    sched = sequential_block_schedule(stmts, rows, mesh.active_coords());
  } else if (a.scheduler == "subnuma") {
    if (a.dense.empty()) throw Error("the subnuma scheduler needs a dense matrix (--dense)");
    sched = subnuma_schedule(layout.at("A").base, rows, cols, a.elem_bytes, mesh.tiles, map);
  } else if (a.scheduler == "greedy") {
    sched = greedy_schedule(stmts, layout, map, mesh);
  } else {
    throw Error("unknown scheduler '" + a.scheduler + "'");
  }

  {
    Output out(g.out);
    write_schedule(out.get(), sched, a.scheduler + " schedule, " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!a.layout_out.empty()) {
    Output lo(a.layout_out);
    write_layout(lo.get(), layout);
  }
}

void cmd_simulate(const Globals& g, const std::string& schedule, const std::string& layout,
                  const std::string& summary, bool no_rectangle_path) {
  const auto map = masks_from(g);
  auto mesh = mesh_from(g);
  if (no_rectangle_path) mesh.charge_rectangle_path = false;
  mesh.validate();
  const auto report = simulate_schedule(load_schedule(schedule), load_layout(layout), map, mesh);
  {
    Output out(g.out);
    write_cost_report_csv(out.get(), report);
  }
  if (summary.empty()) {
    write_cost_summary(std::cerr, report);
  } else {
    Output s(summary);
    write_cost_summary(s.get(), report);
  }
}

void cmd_pool(const Globals& g, unsigned available) {
  Output out(g.out);
  out.get() << "page\n";
  for (auto p : emulate_hugepage_pool(g.seed, available).pages) out.get() << to_hex(p) << '\n';
}

void cmd_pin(const Globals& g, unsigned available, const std::vector<std::string>& required) {
  const auto r = assign_hugepages(addr_args(required), emulate_hugepage_pool(g.seed, available));
  Output out(g.out);
  out.get() << "page,status\n";
  for (auto p : r.assigned) out.get() << to_hex(p) << ",assigned\n";
  for (auto p : r.freed) out.get() << to_hex(p) << ",freed\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cohmesh: XOR address mapping, mesh coherence cost model and quadrant-aware matvec scheduling"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice; also picks the built-in mask set")
      ->capture_default_str();
  app.add_option("--mask-config", g.mask_config, "Mask-set JSON (default: random quadrant-valid set from --seed)");
  app.add_option("--mesh-config", g.mesh_config, "Mesh JSON (default: built-in 6x7 mesh with 38 CHAs)");
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--max-width", g.max_width, "Longest statement the sparse miner emits")->capture_default_str();

  std::string start = "0", len = "0x2000";
  bool histogram = false;
  auto* map = app.add_subcommand("map", "CHA and quadrant of each line in a range");
  map->add_option("--start", start, "First address (hex or decimal)")->capture_default_str();
  map->add_option("--len", len, "Range length in bytes")->capture_default_str();
  map->add_flag("--histogram", histogram, "Emit line counts instead of one row per line");
  map->footer("CSV columns: addr,cha,quadrant,mapped (per line) or kind,index,lines (--histogram; kind is "
              "quadrant, cha or unmapped).");

  std::size_t count = 64;
  auto* samples = app.add_subcommand("samples", "Synthesize (address, CHA) samples from the mask set");
  samples->add_option("--count", count, "Number of samples")->capture_default_str();
  samples->footer("CSV columns: addr (hex),cha (decimal).");

  std::string samples_path, report;
  unsigned bits = 6, restarts = 8;
  std::optional<std::uint32_t> num_chas;
  auto* learn = app.add_subcommand("learn", "Recover XOR masks from sample CSV");
  learn->add_option("samples", samples_path, "Sample CSV with columns addr,cha")->required();
  learn->add_option("--bits", bits, "Number of CHA index bits")->capture_default_str();
  learn->add_option("--num-chas", num_chas, "CHA count written to the config (default 2^bits)");
  learn->add_option("--restarts", restarts, "Reordering attempts when samples conflict")->capture_default_str();
  learn->add_option("--report", report, "Residual report file (default: stderr)");
  learn->footer("Writes the recovered mask-set JSON to --out.");

  std::uint32_t gen_chas = 38;
  unsigned gen_bits = 6;
  auto* gen_masks = app.add_subcommand("gen-masks", "Write a random quadrant-valid mask set");
  gen_masks->add_option("--bits", gen_bits, "Number of CHA index bits")->capture_default_str();
  gen_masks->add_option("--num-chas", gen_chas, "Number of CHAs")->capture_default_str();

  auto* gen_mesh = app.add_subcommand("gen-mesh", "Write the built-in mesh as JSON");

  ScheduleArgs sa;
  auto* schedule = app.add_subcommand("schedule", "Assign matvec statements to tiles");
  schedule->add_option("--matrix", sa.matrix, "Matrix Market file");
  schedule->add_option("--dense", sa.dense, "Dense matrix dimensions, ROWSxCOLS");
  schedule->add_option("--scheduler", sa.scheduler, "sequential, subnuma or greedy")
      ->check(CLI::IsMember({"sequential", "subnuma", "greedy"}))
      ->capture_default_str();
  schedule->add_option("--elem-bytes", sa.elem_bytes, "Bytes per matrix and vector element")->capture_default_str();
  schedule->add_option("--page", sa.pages, "Hugepage bases to lay out on, in order (default: all 16 ascending)");
  schedule->add_option("--layout-out", sa.layout_out, "Write the block layout JSON here");
  schedule->footer("Schedule file: '# comment' lines, 'tile <col> <row>' headers, then one '<row> <a_start> "
                   "<x_start> <width>' line per statement.");

  std::string sched_path, layout_path, summary;
  bool no_rect = false;
  auto* simulate = app.add_subcommand("simulate", "Replay a schedule through the mesh cost model");
  simulate->add_option("--schedule", sched_path, "Schedule file")->required();
  simulate->add_option("--layout", layout_path, "Layout JSON")->required();
  simulate->add_option("--summary", summary, "Summary text file (default: stderr)");
  simulate->add_flag("--no-rectangle-path", no_rect, "Do not charge the directory-to-data leg");
  simulate->footer("CSV columns: tile_col,tile_row,quadrant,statements,accesses,cycles,memory_accesses,"
                   "far_queries,unmapped_queries (one row per tile, schedule order).");

  unsigned available = kMcdramPages;
  auto* pool = app.add_subcommand("pool", "Emulate the hugepage pool a process would get");
  pool->add_option("--available", available, "Pages the allocator hands out (1..16)")->capture_default_str();
  pool->footer("CSV columns: page.");

  std::vector<std::string> required;
  auto* pin = app.add_subcommand("pin", "Keep the required pages from an emulated pool and free the rest");
  pin->add_option("--available", available, "Pages the allocator hands out (1..16)")->capture_default_str();
  pin->add_option("required", required, "Required page bases");
  pin->footer("CSV columns: page,status (assigned or freed).");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*map) cmd_map(g, start, len, histogram);
    else if (*samples) cmd_samples(g, count);
    else if (*learn) cmd_learn(g, samples_path, bits, num_chas, restarts, report);
    else if (*gen_masks) cmd_gen_masks(g, gen_bits, gen_chas);
    else if (*gen_mesh) cmd_gen_mesh(g);
    else if (*schedule) cmd_schedule(g, sa);
    else if (*simulate) cmd_simulate(g, sched_path, layout_path, summary, no_rect);
    else if (*pool) cmd_pool(g, available);
    else if (*pin) cmd_pin(g, available, required);
  } catch (const std::exception& e) {
    std::cerr << "cohmesh: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
