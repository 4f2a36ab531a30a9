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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "forkbench/netsim.hpp"

namespace forkbench {

// ExpectNoDoubleSpend is what harden() assigns: only safety is asserted.
enum class Expectation { ExpectDoubleSpend, ExpectRefusal, ExpectClean, ExpectLeaderCapture, ExpectNoDoubleSpend };

std::string_view to_string(Expectation e);
Expectation expectation_from_string(std::string_view s);

struct TxText {
  uint64_t nonce = 0;
  uint64_t gas_limit = 1000;
  // Assembler source.
  std::string script;
  // Assembler source of the witness' verification script; empty = no witness.
  std::string witness;
};

/// A scenario as written by hand or in a spec file (scripts as text).
struct ScenarioSpec {
  std::string name;
  // Attack class the scenario reproduces. Never empty for built-ins.
  std::string reference;
  std::string description;
  Expectation expectation = Expectation::ExpectClean;
  std::string verification_script;
  std::vector<GenesisBalance> genesis;
  std::vector<NodeSpec> nodes;
  std::vector<std::vector<TxText>> blocks;
  std::vector<Delivery> deliveries;
  std::optional<VrfRounds> vrf;
};

class UnknownScenario : public std::runtime_error {
 public:
  explicit UnknownScenario(const std::string& name) : std::runtime_error("unknown scenario: " + name) {}
};

class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const ScenarioSpec& spec);
/// Throws ConfigParseError on schema violations.
ScenarioSpec scenario_from_json(const nlohmann::json& j);
ScenarioSpec load_scenario_file(const std::string& path);

/// Dotted-path assignment on the JSON form, e.g. `nodes.1.profile.memcmp_mode=Raw`.
/// Array segments may be an index, a node id, or `*` for every element.
/// The value is parsed as JSON when possible, otherwise taken as a string.
ScenarioSpec apply_overrides(const ScenarioSpec& spec, const std::vector<std::string>& overrides);

/// Every node gets the all-hardened VerificationConfig (mitigation on), VRF
/// selection switches to the strict key policy and the expectation becomes
/// ExpectNoDoubleSpend. Platform profiles are left alone.
ScenarioSpec harden(const ScenarioSpec& spec);

/// Throws ConfigParseError when a script does not assemble.
WorldSpec compile(const ScenarioSpec& spec);

struct CatalogEntry {
  std::string name;
  std::string reference;
  Expectation expectation;
};

const std::vector<ScenarioSpec>& catalog();
std::vector<CatalogEntry> list_scenarios();
/// Throws UnknownScenario.
const ScenarioSpec& find_scenario(std::string_view name);
/// Catalog name first, then a spec file path. Throws UnknownScenario when
/// neither exists, ConfigParseError when the file is malformed.
ScenarioSpec resolve_scenario(const std::string& name_or_path);

struct Verdict {
  bool pass = false;
  std::string reason;
};

struct NodeSummary {
  std::string id;
  Role role;
  uint64_t height = 0;
  Digest state_digest;
};

struct ScenarioReport {
  std::string name;
  std::string reference;
  uint64_t seed = 0;
  Expectation expectation;
  std::vector<std::string> overrides;
  std::vector<NodeSummary> nodes;
  std::vector<Event> events;
  std::optional<VrfStats> vrf;
  Verdict verdict;

  size_t count(std::string_view kind) const;
};

Verdict evaluate(Expectation expectation, const WorldState& world);

ScenarioReport run_scenario(const ScenarioSpec& spec, uint64_t seed,
                            const std::vector<std::string>& overrides = {});

/// Resolves `name_or_path` against the catalog, then as a spec file.
ScenarioReport run_scenario(const std::string& name_or_path, uint64_t seed,
                            const std::vector<std::string>& overrides = {});

nlohmann::json event_to_json(const Event& e);
nlohmann::json to_json(const ScenarioReport& report);

/// Sorted keys, two-space indent, trailing newline.
std::string serialize_report(const ScenarioReport& report);

}  // namespace forkbench
