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

#include <cstdio>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "forkbench/scenario.hpp"

namespace forkbench {
namespace {

TEST(Catalog, Shape) {
  const auto entries = list_scenarios();
  EXPECT_EQ(entries.size(), 16u);
  std::set<std::string> names;
  for (const CatalogEntry& e : entries) {
    EXPECT_FALSE(e.reference.empty()) << e.name;
    EXPECT_TRUE(names.insert(e.name).second) << e.name;
  }
  EXPECT_EQ(find_scenario("S7-vrf-zero-key").expectation, Expectation::ExpectLeaderCapture);
  EXPECT_THROW(find_scenario("S99"), UnknownScenario);
}

TEST(RunScenario, MerkleDup) {
  const ScenarioReport r = run_scenario(std::string("S2-merkle-dup"), 7);
  EXPECT_TRUE(r.verdict.pass) << r.verdict.reason;
  EXPECT_EQ(r.count("DoubleSpend"), 1u);
}

TEST(RunScenario, MerkleDupMitigated) {
  const ScenarioReport r = run_scenario(std::string("S8.2-merkle-dup-mitigated"), 7);
  EXPECT_TRUE(r.verdict.pass) << r.verdict.reason;
  EXPECT_GE(r.count("DivergenceRefused"), 1u);
  EXPECT_EQ(r.count("DoubleSpend"), 0u);
}

TEST(RunScenario, Baseline) {
  const ScenarioReport r = run_scenario(std::string("S0-honest-baseline"), 7);
  EXPECT_TRUE(r.verdict.pass) << r.verdict.reason;
  EXPECT_EQ(r.count("DoubleSpend") + r.count("ForkDetected") + r.count("DivergenceRefused") +
                r.count("BlockRejected"),
            0u);
}

TEST(RunScenario, UnknownName) {
  EXPECT_THROW(run_scenario(std::string("no-such-scenario"), 7), UnknownScenario);
}

TEST(SpecJson, RoundTripsEveryBuiltin) {
  for (const ScenarioSpec& s : catalog()) {
    const nlohmann::json j = to_json(s);
    EXPECT_EQ(to_json(scenario_from_json(j)), j) << s.name;
  }
}

// scenarios/*.json are `forkbench dump` output and must track the catalog.
TEST(SpecFile, ShippedFilesMatchCatalog) {
  for (const CatalogEntry& e : list_scenarios()) {
    const std::string path = std::string(FORKBENCH_SCENARIO_DIR) + "/" + e.name + ".json";
    const ScenarioSpec spec = load_scenario_file(path);
    EXPECT_EQ(to_json(spec), to_json(find_scenario(e.name))) << path;
  }
}

TEST(SpecJson, DefaultsAndErrors) {
  const auto minimal = nlohmann::json::parse(R"({
    "name": "mini", "expectation": "ExpectClean", "verification_script": "PUSH_INT 1\nHALT",
    "nodes": [{"id": "P", "role": "Producer"}, {"id": "V", "role": "Validator"}],
    "blocks": [[{"script": "HALT", "witness": "PUSH_INT 1\nHALT"}]]
  })");
  const ScenarioSpec s = scenario_from_json(minimal);
  EXPECT_EQ(s.nodes[1].cfg, VerificationConfig::all_hardened());
  EXPECT_EQ(s.blocks[0][0].gas_limit, 1000u);
  EXPECT_TRUE(run_scenario(s, 1).verdict.pass);

  auto bad = minimal;
  bad["expectation"] = "ExpectMiracles";
  EXPECT_THROW(scenario_from_json(bad), ConfigParseError);
  bad = minimal;
  bad["nodes"][0]["profile"] = {{"memcmp_mode", "Weird"}};
  EXPECT_THROW(scenario_from_json(bad), ConfigParseError);
  bad = minimal;
  bad.erase("nodes");
  EXPECT_THROW(scenario_from_json(bad), ConfigParseError);
  bad = minimal;
  bad["blocks"][0][0]["script"] = "NOT_AN_OP";
  EXPECT_THROW(compile(scenario_from_json(bad)), ConfigParseError);
}

TEST(SpecFile, LoadsFromDisk) {
  const std::string path = testing::TempDir() + "forkbench_spec.json";
  {
    std::ofstream out(path);
    out << to_json(find_scenario("S5-memcmp")).dump(2);
  }
  const ScenarioReport r = run_scenario(path, 7);
  EXPECT_TRUE(r.verdict.pass);
  EXPECT_EQ(r.name, "S5-memcmp");
  std::remove(path.c_str());

  EXPECT_THROW(load_scenario_file("/nonexistent/spec.json"), ConfigParseError);
}

TEST(Overrides, PathForms) {
  const ScenarioSpec& base = find_scenario("S5-memcmp");
  const ScenarioSpec by_index = apply_overrides(base, {"nodes.2.profile.memcmp_mode=Raw"});
  EXPECT_EQ(by_index.nodes[2].profile.memcmp_mode, MemcmpMode::Raw);
  const ScenarioSpec by_id = apply_overrides(base, {"nodes.V2.profile.memcmp_mode=Raw"});
  EXPECT_EQ(to_json(by_id), to_json(by_index));
  const ScenarioSpec all = apply_overrides(base, {"nodes.*.cfg.write_set_check=true"});
  for (const NodeSpec& n : all.nodes) EXPECT_TRUE(n.cfg.write_set_check);
  const ScenarioSpec str = apply_overrides(base, {"description=plain text"});
  EXPECT_EQ(str.description, "plain text");
  const ScenarioSpec num = apply_overrides(base, {"blocks.0.0.gas_limit=3"});
  EXPECT_EQ(num.blocks[0][0].gas_limit, 3u);
}

TEST(Overrides, Errors) {
  const ScenarioSpec& base = find_scenario("S5-memcmp");
  EXPECT_THROW(apply_overrides(base, {"nodes.9.cfg.write_set_check=true"}), ConfigParseError);
  EXPECT_THROW(apply_overrides(base, {"nodes.ghost.cfg.write_set_check=true"}), ConfigParseError);
  EXPECT_THROW(apply_overrides(base, {"no_equals_sign"}), ConfigParseError);
  EXPECT_THROW(apply_overrides(base, {"nodes.0.profile.memcmp_mode=Sideways"}), ConfigParseError);
  EXPECT_THROW(apply_overrides(base, {"name.deeper=1"}), ConfigParseError);
  EXPECT_THROW(apply_overrides(base, {"nosuch.key=1"}), ConfigParseError);
}

TEST(Overrides, DisablingMitigationRestoresAttack) {
  const ScenarioReport r =
      run_scenario(find_scenario("S8.5-memcmp-mitigated"), 7,
                   {"nodes.*.cfg.write_set_check=false", "expectation=ExpectDoubleSpend"});
  EXPECT_TRUE(r.verdict.pass) << r.verdict.reason;
  EXPECT_EQ(r.count("DoubleSpend"), 1u);
}

TEST(Harden, ForcesHardenedConfig) {
  for (const ScenarioSpec& s : catalog()) {
    const ScenarioSpec h = harden(s);
    EXPECT_EQ(h.expectation, Expectation::ExpectNoDoubleSpend);
    for (const NodeSpec& n : h.nodes) EXPECT_EQ(n.cfg, VerificationConfig::all_hardened());
    if (h.vrf) EXPECT_EQ(h.vrf->policy, vrf::KeyPolicy::Strict);
    const ScenarioReport r = run_scenario(h, 7);
    EXPECT_TRUE(r.verdict.pass) << s.name << ": " << r.verdict.reason;
    EXPECT_EQ(r.count("DoubleSpend"), 0u) << s.name;
  }
}

TEST(Report, ByteIdenticalAcrossRuns) {
  for (const ScenarioSpec& s : catalog()) {
    EXPECT_EQ(serialize_report(run_scenario(s, 11)), serialize_report(run_scenario(s, 11))) << s.name;
  }
}

TEST(Report, Shape) {
  const ScenarioReport r = run_scenario(std::string("S1-witness-bypass"), 7);
  const auto j = nlohmann::json::parse(serialize_report(r));
  EXPECT_EQ(j["scenario"], "S1-witness-bypass");
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["verdict"]["status"], "Pass");
  EXPECT_EQ(j["summary"]["double_spends"], 1);
  EXPECT_EQ(j["nodes"].size(), 4u);
  for (const auto& n : j["nodes"]) EXPECT_EQ(n["state_digest"].get<std::string>().size(), 64u);
  const std::string text = serialize_report(r);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(j.dump(2) + "\n", text);
}

TEST(Evaluate, VerdictRules) {
  WorldState w;
  EXPECT_TRUE(evaluate(Expectation::ExpectClean, w).pass);
  EXPECT_FALSE(evaluate(Expectation::ExpectDoubleSpend, w).pass);
  EXPECT_FALSE(evaluate(Expectation::ExpectRefusal, w).pass);
  EXPECT_TRUE(evaluate(Expectation::ExpectNoDoubleSpend, w).pass);
  EXPECT_FALSE(evaluate(Expectation::ExpectLeaderCapture, w).pass);

  w.trace.push_back(DivergenceRefused{"v", 1, {}, {}});
  EXPECT_TRUE(evaluate(Expectation::ExpectRefusal, w).pass);
  EXPECT_FALSE(evaluate(Expectation::ExpectClean, w).pass);
  w.trace.push_back(DoubleSpend{"TKN", {}, 1, {}});
  EXPECT_FALSE(evaluate(Expectation::ExpectRefusal, w).pass);
  EXPECT_TRUE(evaluate(Expectation::ExpectDoubleSpend, w).pass);
  EXPECT_FALSE(evaluate(Expectation::ExpectNoDoubleSpend, w).pass);
}

TEST(Expectation, StringRoundTrip) {
  for (Expectation e : {Expectation::ExpectDoubleSpend, Expectation::ExpectRefusal, Expectation::ExpectClean,
                        Expectation::ExpectLeaderCapture, Expectation::ExpectNoDoubleSpend}) {
    EXPECT_EQ(expectation_from_string(to_string(e)), e);
  }
}

}  // namespace
}  // namespace forkbench
