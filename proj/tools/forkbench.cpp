/*
 * Copyright 2026 The forkbench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// forkbench command line.
//
//   forkbench list
//   forkbench run <name|file> [--seed N] [--set k=v ...] [--out FILE] [--harden]
//   forkbench run-all [--out-dir DIR] [--seed N] [--set k=v ...] [--harden] [--jobs N]
//   forkbench dump <name> [--out FILE]
//
// Exit status: 0 all verdicts Pass, 1 some verdict Fail, 2 usage or config error.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "forkbench/scenario.hpp"

namespace fs = std::filesystem;
using namespace forkbench;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// Write to a sibling temp file, then rename over the target.
void write_atomically(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string summary_line(const ScenarioReport& r) {
  std::string line = std::string(r.verdict.pass ? "PASS " : "FAIL ") + r.name;
  line += "  double_spends=" + std::to_string(r.count("DoubleSpend"));
  line += " refusals=" + std::to_string(r.count("DivergenceRefused"));
  line += " rejected=" + std::to_string(r.count("BlockRejected"));
  line += " forks=" + std::to_string(r.count("ForkDetected"));
  if (r.vrf) line += " adversary_wins=" + std::to_string(r.vrf->adversary_wins) + "/" + std::to_string(r.vrf->rounds);
  if (!r.verdict.pass) line += "  (" + r.verdict.reason + ")";
  return line;
}

int cmd_list() {
  for (const CatalogEntry& e : list_scenarios()) {
    std::printf("%-32s %-22s %s\n", e.name.c_str(), std::string(to_string(e.expectation)).c_str(),
                e.reference.c_str());
  }
  return kExitPass;
}

int cmd_run(const std::string& name, uint64_t seed, const std::vector<std::string>& sets, const std::string& out,
            bool hardened) {
  ScenarioSpec spec = resolve_scenario(name);
  if (hardened) spec = harden(spec);
  const ScenarioReport report = run_scenario(spec, seed, sets);
  const std::string text = serialize_report(report);
  if (out.empty()) {
    std::cout << text;
    std::cerr << summary_line(report) << "\n";
  } else {
    write_atomically(out, text);
    std::cout << summary_line(report) << "\n";
  }
  return report.verdict.pass ? kExitPass : kExitFail;
}

int cmd_run_all(const std::string& out_dir, uint64_t seed, const std::vector<std::string>& sets, bool hardened,
                unsigned jobs) {
  const std::vector<ScenarioSpec>& specs = catalog();
  std::vector<std::optional<ScenarioReport>> reports(specs.size());
  std::vector<std::string> errors(specs.size());

  // Overrides are validated once up front so a bad --set is a usage error.
  for (const ScenarioSpec& s : specs) (void)apply_overrides(s, sets);

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < specs.size(); i = next++) {
      try {
        ScenarioSpec spec = hardened ? harden(specs[i]) : specs[i];
        ScenarioReport report = run_scenario(spec, seed, sets);
        write_atomically(fs::path(out_dir) / (report.name + ".json"), serialize_report(report));
        reports[i] = std::move(report);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(specs.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  size_t passed = 0, double_spends = 0;
  bool config_error = false;
  for (size_t i = 0; i < specs.size(); ++i) {
    if (!reports[i]) {
      std::cout << "ERROR " << specs[i].name << "  " << errors[i] << "\n";
      config_error = true;
      continue;
    }
    std::cout << summary_line(*reports[i]) << "\n";
    passed += reports[i]->verdict.pass;
    double_spends += reports[i]->count("DoubleSpend");
  }
  std::cout << passed << "/" << specs.size() << " scenarios passed, " << double_spends
            << " DoubleSpend event(s), reports in " << out_dir << "\n";
  if (config_error) return kExitUsage;
  return passed == specs.size() ? kExitPass : kExitFail;
}

int cmd_dump(const std::string& name, const std::string& out) {
  const std::string text = to_json(find_scenario(name)).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_atomically(out, text);
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forkbench: deterministic multi-node double-spend scenarios"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List built-in scenarios");

  std::string name, out, out_dir = "reports";
  uint64_t seed = 7;
  std::vector<std::string> sets;
  bool hardened = false;
  unsigned jobs = 0;

  auto* run = app.add_subcommand("run", "Run one scenario (catalog name or spec file)");
  run->add_option("name", name, "Scenario name or JSON spec file")->required();
  run->add_option("--seed", seed, "Run seed")->capture_default_str();
  run->add_option("--set", sets, "Override, dotted.path=value (repeatable)");
  run->add_option("--out", out, "Write the JSON report here instead of stdout");
  run->add_flag("--harden", hardened, "Force all-hardened validation and write-set hashing");

  auto* run_all = app.add_subcommand("run-all", "Run the whole catalog");
  run_all->add_option("--out-dir", out_dir, "Report directory")->capture_default_str();
  run_all->add_option("--seed", seed, "Run seed")->capture_default_str();
  run_all->add_option("--set", sets, "Override applied to every scenario (repeatable)");
  run_all->add_flag("--harden", hardened, "Force all-hardened validation and write-set hashing");
  run_all->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");

  auto* dump = app.add_subcommand("dump", "Print a built-in scenario as a JSON spec file");
  dump->add_option("name", name, "Scenario name")->required();
  dump->add_option("--out", out, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (list->parsed()) return cmd_list();
    if (run->parsed()) return cmd_run(name, seed, sets, out, hardened);
    if (run_all->parsed()) return cmd_run_all(out_dir, seed, sets, hardened, jobs);
    if (dump->parsed()) return cmd_dump(name, out);
  } catch (const UnknownScenario& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
