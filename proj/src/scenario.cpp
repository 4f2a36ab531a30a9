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

#include "forkbench/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "forkbench/assembler.hpp"

namespace forkbench {

using nlohmann::json;

std::string_view to_string(Expectation e) {
  switch (e) {
    case Expectation::ExpectDoubleSpend: return "ExpectDoubleSpend";
    case Expectation::ExpectRefusal: return "ExpectRefusal";
    case Expectation::ExpectClean: return "ExpectClean";
    case Expectation::ExpectLeaderCapture: return "ExpectLeaderCapture";
    case Expectation::ExpectNoDoubleSpend: return "ExpectNoDoubleSpend";
  }
  return "?";
}

Expectation expectation_from_string(std::string_view s) {
  for (Expectation e : {Expectation::ExpectDoubleSpend, Expectation::ExpectRefusal, Expectation::ExpectClean,
                        Expectation::ExpectLeaderCapture, Expectation::ExpectNoDoubleSpend}) {
    if (to_string(e) == s) return e;
  }
  throw std::invalid_argument("unknown expectation: " + std::string(s));
}

// --- spec <-> JSON ---

namespace {

json profile_to_json(const PlatformProfile& p) {
  return json{{"memcmp_mode", to_string(p.memcmp_mode)}, {"bigdiv_mode", to_string(p.bigdiv_mode)},
              {"uninit_mode", to_string(p.uninit_mode)}, {"uninit_seed", p.uninit_seed},
              {"bounds_mode", to_string(p.bounds_mode)}, {"oob_seed", p.oob_seed},
              {"max_pages", p.max_pages}};
}

json cfg_to_json(const VerificationConfig& c) {
  return json{{"merkle_mode", to_string(c.merkle_mode)},
              {"witness_mode", to_string(c.witness_mode)},
              {"duplicate_tx_check", c.duplicate_tx_check},
              {"trust_persisted_blocks", c.trust_persisted_blocks},
              {"write_set_check", c.write_set_check}};
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return it->get<T>();
}

std::string string_or(const json& j, const char* key, std::string_view fallback) {
  return field_or<std::string>(j, key, std::string(fallback));
}

PlatformProfile profile_from_json(const json& j) {
  PlatformProfile d;
  PlatformProfile p;
  p.memcmp_mode = memcmp_mode_from_string(string_or(j, "memcmp_mode", to_string(d.memcmp_mode)));
  p.bigdiv_mode = bigdiv_mode_from_string(string_or(j, "bigdiv_mode", to_string(d.bigdiv_mode)));
  p.uninit_mode = uninit_mode_from_string(string_or(j, "uninit_mode", to_string(d.uninit_mode)));
  p.uninit_seed = field_or<uint64_t>(j, "uninit_seed", d.uninit_seed);
  p.bounds_mode = bounds_mode_from_string(string_or(j, "bounds_mode", to_string(d.bounds_mode)));
  p.oob_seed = field_or<uint64_t>(j, "oob_seed", d.oob_seed);
  p.max_pages = field_or<uint32_t>(j, "max_pages", d.max_pages);
  return p;
}

VerificationConfig cfg_from_json(const json& j) {
  VerificationConfig d;
  VerificationConfig c;
  c.merkle_mode = merkle_mode_from_string(string_or(j, "merkle_mode", to_string(d.merkle_mode)));
  c.witness_mode = witness_mode_from_string(string_or(j, "witness_mode", to_string(d.witness_mode)));
  c.duplicate_tx_check = field_or<bool>(j, "duplicate_tx_check", d.duplicate_tx_check);
  c.trust_persisted_blocks = field_or<bool>(j, "trust_persisted_blocks", d.trust_persisted_blocks);
  c.write_set_check = field_or<bool>(j, "write_set_check", d.write_set_check);
  return c;
}

}  // namespace

json to_json(const ScenarioSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["reference"] = spec.reference;
  j["description"] = spec.description;
  j["expectation"] = to_string(spec.expectation);
  j["verification_script"] = spec.verification_script;

  j["genesis"] = json::array();
  for (const GenesisBalance& g : spec.genesis) {
    j["genesis"].push_back({{"token", g.token}, {"account", g.account}, {"amount", g.amount}});
  }
  j["nodes"] = json::array();
  for (const NodeSpec& n : spec.nodes) {
    j["nodes"].push_back({{"id", n.id},
                          {"role", to_string(n.role)},
                          {"profile", profile_to_json(n.profile)},
                          {"cfg", cfg_to_json(n.cfg)}});
  }
  j["blocks"] = json::array();
  for (const auto& block : spec.blocks) {
    json txs = json::array();
    for (const TxText& tx : block) {
      txs.push_back({{"nonce", tx.nonce}, {"gas_limit", tx.gas_limit}, {"script", tx.script}, {"witness", tx.witness}});
    }
    j["blocks"].push_back(std::move(txs));
  }
  j["deliveries"] = json::array();
  for (const Delivery& d : spec.deliveries) {
    j["deliveries"].push_back({{"block", d.block},
                               {"to", d.to},
                               {"mutation", to_string(d.mutation.kind)},
                               {"tx_index", d.mutation.tx_index}});
  }
  if (spec.vrf) {
    j["vrf"] = {{"rounds", spec.vrf->rounds},
                {"policy", vrf::to_string(spec.vrf->policy)},
                {"adversary_key", spec.vrf->adversary_key}};
  }
  return j;
}

ScenarioSpec scenario_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ConfigParseError("scenario must be a JSON object");
    ScenarioSpec spec;
    spec.name = j.at("name").get<std::string>();
    spec.reference = string_or(j, "reference", "");
    spec.description = string_or(j, "description", "");
    spec.expectation = expectation_from_string(j.at("expectation").get<std::string>());
    spec.verification_script = string_or(j, "verification_script", "");

    for (const json& g : j.value("genesis", json::array())) {
      spec.genesis.push_back({g.at("token").get<std::string>(), g.at("account").get<std::string>(),
                              g.at("amount").get<uint64_t>()});
    }
    for (const json& n : j.at("nodes")) {
      NodeSpec node;
      node.id = n.at("id").get<std::string>();
      node.role = role_from_string(n.at("role").get<std::string>());
      node.profile = profile_from_json(n.value("profile", json::object()));
      node.cfg = cfg_from_json(n.value("cfg", json::object()));
      spec.nodes.push_back(std::move(node));
    }
    for (const json& b : j.value("blocks", json::array())) {
      std::vector<TxText> txs;
      for (const json& t : b) {
        TxText tx;
        tx.nonce = field_or<uint64_t>(t, "nonce", 0);
        tx.gas_limit = field_or<uint64_t>(t, "gas_limit", 1000);
        tx.script = t.at("script").get<std::string>();
        tx.witness = string_or(t, "witness", "");
        txs.push_back(std::move(tx));
      }
      spec.blocks.push_back(std::move(txs));
    }
    for (const json& d : j.value("deliveries", json::array())) {
      Delivery del;
      del.block = d.at("block").get<size_t>();
      del.to = d.at("to").get<std::string>();
      del.mutation.kind = mutation_kind_from_string(string_or(d, "mutation", "None"));
      del.mutation.tx_index = field_or<size_t>(d, "tx_index", 0);
      spec.deliveries.push_back(std::move(del));
    }
    if (auto it = j.find("vrf"); it != j.end() && !it->is_null()) {
      VrfRounds v;
      v.rounds = field_or<uint64_t>(*it, "rounds", v.rounds);
      v.policy = vrf::key_policy_from_string(string_or(*it, "policy", "Lax"));
      v.adversary_key = field_or<uint64_t>(*it, "adversary_key", 0);
      spec.vrf = v;
    }
    return spec;
  } catch (const ConfigParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigParseError(std::string("scenario: ") + e.what());
  }
}

ScenarioSpec load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open scenario file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigParseError(path + ": " + e.what());
  }
  return scenario_from_json(j);
}

// --- overrides ---

namespace {

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t dot = path.find('.', start);
    parts.emplace_back(path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

std::optional<size_t> parse_index(const std::string& s) {
  size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

void assign(json& node, const std::vector<std::string>& path, size_t depth, const json& value,
            const std::string& original) {
  const std::string& seg = path[depth];
  const bool last = depth + 1 == path.size();

  auto descend = [&](json& child) {
    if (last) {
      child = value;
    } else {
      assign(child, path, depth + 1, value, original);
    }
  };

  if (node.is_array()) {
    if (seg == "*") {
      for (json& child : node) descend(child);
      return;
    }
    if (auto idx = parse_index(seg)) {
      if (*idx >= node.size()) throw ConfigParseError("override " + original + ": index " + seg + " out of range");
      descend(node[*idx]);
      return;
    }
    for (json& child : node) {
      if (child.is_object() && child.value("id", std::string()) == seg) {
        descend(child);
        return;
      }
    }
    throw ConfigParseError("override " + original + ": no element with id " + seg);
  }
  if (node.is_object() || node.is_null()) {
    if (!last && !node.contains(seg)) throw ConfigParseError("override " + original + ": unknown key " + seg);
    descend(node[seg]);
    return;
  }
  throw ConfigParseError("override " + original + ": cannot descend into scalar at " + seg);
}

}  // namespace

ScenarioSpec apply_overrides(const ScenarioSpec& spec, const std::vector<std::string>& overrides) {
  if (overrides.empty()) return spec;
  json j = to_json(spec);
  for (const std::string& ov : overrides) {
    size_t eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigParseError("override must be key=value: " + ov);
    const std::string key = ov.substr(0, eq);
    const std::string raw = ov.substr(eq + 1);
    json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = raw;
    assign(j, split_path(key), 0, value, ov);
  }
  return scenario_from_json(j);
}

ScenarioSpec harden(const ScenarioSpec& spec) {
  ScenarioSpec out = spec;
  for (NodeSpec& n : out.nodes) n.cfg = VerificationConfig::all_hardened();
  if (out.vrf) out.vrf->policy = vrf::KeyPolicy::Strict;
  out.expectation = Expectation::ExpectNoDoubleSpend;
  return out;
}

WorldSpec compile(const ScenarioSpec& spec) {
  auto assemble_or_throw = [&](const std::string& source, const std::string& where) {
    try {
      return assemble(source);
    } catch (const AssemblyError& e) {
      throw ConfigParseError(spec.name + ": " + where + ": " + e.what());
    }
  };

  WorldSpec world;
  world.nodes = spec.nodes;
  world.genesis = spec.genesis;
  world.verification_script = assemble_or_throw(spec.verification_script, "verification_script");
  for (size_t b = 0; b < spec.blocks.size(); ++b) {
    std::vector<Transaction> txs;
    for (size_t t = 0; t < spec.blocks[b].size(); ++t) {
      const TxText& text = spec.blocks[b][t];
      const std::string where = "block " + std::to_string(b) + " tx " + std::to_string(t);
      Transaction tx;
      tx.body.nonce = text.nonce;
      tx.body.gas_limit = text.gas_limit;
      tx.body.script = assemble_or_throw(text.script, where + " script");
      tx.witness.verification_script = assemble_or_throw(text.witness, where + " witness");
      txs.push_back(std::move(tx));
    }
    world.blocks.push_back(std::move(txs));
  }
  world.deliveries = spec.deliveries;
  world.vrf = spec.vrf;
  return world;
}

std::vector<CatalogEntry> list_scenarios() {
  std::vector<CatalogEntry> out;
  for (const ScenarioSpec& s : catalog()) out.push_back({s.name, s.reference, s.expectation});
  return out;
}

const ScenarioSpec& find_scenario(std::string_view name) {
  for (const ScenarioSpec& s : catalog()) {
    if (s.name == name) return s;
  }
  throw UnknownScenario(std::string(name));
}

ScenarioSpec resolve_scenario(const std::string& name_or_path) {
  for (const ScenarioSpec& s : catalog()) {
    if (s.name == name_or_path) return s;
  }
  std::error_code ec;
  if (!std::filesystem::is_regular_file(name_or_path, ec)) throw UnknownScenario(name_or_path);
  return load_scenario_file(name_or_path);
}

// --- verdicts & reports ---

namespace {

size_t count_kind(const std::vector<Event>& events, std::string_view kind) {
  return static_cast<size_t>(
      std::count_if(events.begin(), events.end(), [&](const Event& e) { return event_kind(e) == kind; }));
}

}  // namespace

size_t ScenarioReport::count(std::string_view kind) const { return count_kind(events, kind); }

Verdict evaluate(Expectation expectation, const WorldState& world) {
  const size_t double_spends = count_kind(world.trace, "DoubleSpend");
  const size_t refusals = count_kind(world.trace, "DivergenceRefused");
  const size_t forks = count_kind(world.trace, "ForkDetected");
  const size_t rejected = count_kind(world.trace, "BlockRejected");

  switch (expectation) {
    case Expectation::ExpectDoubleSpend:
      if (double_spends == 0) return {false, "expected a DoubleSpend event, saw none"};
      return {true, ""};
    case Expectation::ExpectRefusal:
      if (double_spends != 0) return {false, std::to_string(double_spends) + " DoubleSpend event(s) despite mitigation"};
      if (refusals == 0) return {false, "expected a DivergenceRefused event, saw none"};
      return {true, ""};
    case Expectation::ExpectClean: {
      if (double_spends || refusals || forks || rejected) {
        std::ostringstream why;
        why << "expected a clean trace: " << double_spends << " DoubleSpend, " << refusals << " DivergenceRefused, "
            << forks << " ForkDetected, " << rejected << " BlockRejected";
        return {false, why.str()};
      }
      if (world.vrf) {
        if (world.vrf->adversary_wins != 0) return {false, "adversary was elected leader"};
        if (world.vrf->distinct_leaders < 2) return {false, "fewer than two distinct leaders"};
      }
      return {true, ""};
    }
    case Expectation::ExpectNoDoubleSpend:
      if (double_spends != 0) return {false, std::to_string(double_spends) + " DoubleSpend event(s)"};
      if (world.vrf && world.vrf->adversary_wins != 0) return {false, "adversary was elected leader"};
      return {true, ""};
    case Expectation::ExpectLeaderCapture: {
      if (!world.vrf) return {false, "scenario has no VRF rounds"};
      const VrfStats& v = *world.vrf;
      if (v.adversary_eligible_rounds != v.rounds) return {false, "adversary key excluded from some rounds"};
      if (v.adversary_distinct_betas != 1) return {false, "adversary VRF output varied across rounds"};
      if (v.adversary_beta != vrf::degenerate_beta()) return {false, "adversary output is not the identity beta"};
      return {true, ""};
    }
  }
  return {false, "unknown expectation"};
}

ScenarioReport run_scenario(const ScenarioSpec& base, uint64_t seed, const std::vector<std::string>& overrides) {
  const ScenarioSpec spec = apply_overrides(base, overrides);
  WorldState world;
  try {
    world = run_world(compile(spec), seed);
  } catch (const BadIndex& e) {
    throw ScenarioError(e.what());
  }

  ScenarioReport report;
  report.name = spec.name;
  report.reference = spec.reference;
  report.seed = seed;
  report.expectation = spec.expectation;
  report.overrides = overrides;
  for (const NodeRecord& n : world.nodes) {
    report.nodes.push_back({n.spec.id, n.spec.role, n.state.height, n.state.digest()});
  }
  report.verdict = evaluate(spec.expectation, world);
  report.events = std::move(world.trace);
  report.vrf = world.vrf;
  return report;
}

ScenarioReport run_scenario(const std::string& name_or_path, uint64_t seed, const std::vector<std::string>& overrides) {
  return run_scenario(resolve_scenario(name_or_path), seed, overrides);
}

json event_to_json(const Event& e) {
  json j;
  j["kind"] = event_kind(e);
  std::visit(
      [&](const auto& ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, BlockAccepted>) {
          j["node"] = ev.node;
          j["block"] = ev.block.hex();
          j["height"] = ev.height;
        } else if constexpr (std::is_same_v<T, BlockRejected>) {
          j["node"] = ev.node;
          j["block"] = ev.block.hex();
          j["height"] = ev.height;
          j["reason"] = ev.reason;
        } else if constexpr (std::is_same_v<T, ForkDetected>) {
          j["height"] = ev.height;
          j["digests"] = json::array();
          for (const Digest& d : ev.digests) j["digests"].push_back(d.hex());
        } else if constexpr (std::is_same_v<T, DoubleSpend>) {
          j["token"] = ev.token;
          j["origin_tx"] = ev.origin_tx.hex();
          j["height"] = ev.height;
          j["credited"] = json::array();
          for (const auto& [node, account] : ev.credited) j["credited"].push_back({{"node", node}, {"account", account}});
        } else if constexpr (std::is_same_v<T, DivergenceRefused>) {
          j["node"] = ev.node;
          j["height"] = ev.height;
          j["expected"] = ev.expected.hex();
          j["got"] = ev.got.hex();
        } else if constexpr (std::is_same_v<T, LeaderElected>) {
          j["round"] = ev.round;
          j["leader"] = ev.leader;
          j["beta"] = ev.beta.hex();
        }
      },
      e);
  return j;
}

json to_json(const ScenarioReport& r) {
  json j;
  j["scenario"] = r.name;
  j["reference"] = r.reference;
  j["seed"] = r.seed;
  j["expectation"] = to_string(r.expectation);
  j["overrides"] = r.overrides;
  j["verdict"] = r.verdict.pass ? json{{"status", "Pass"}} : json{{"status", "Fail"}, {"reason", r.verdict.reason}};

  j["nodes"] = json::array();
  for (const NodeSummary& n : r.nodes) {
    j["nodes"].push_back(
        {{"id", n.id}, {"role", to_string(n.role)}, {"height", n.height}, {"state_digest", n.state_digest.hex()}});
  }
  j["events"] = json::array();
  for (const Event& e : r.events) j["events"].push_back(event_to_json(e));

  j["summary"] = {{"blocks_accepted", r.count("BlockAccepted")},
                  {"blocks_rejected", r.count("BlockRejected")},
                  {"divergence_refusals", r.count("DivergenceRefused")},
                  {"double_spends", r.count("DoubleSpend")},
                  {"forks", r.count("ForkDetected")}};
  if (r.vrf) {
    j["vrf"] = {{"rounds", r.vrf->rounds},
                {"adversary_wins", r.vrf->adversary_wins},
                {"adversary_eligible_rounds", r.vrf->adversary_eligible_rounds},
                {"adversary_distinct_betas", r.vrf->adversary_distinct_betas},
                {"distinct_leaders", r.vrf->distinct_leaders},
                {"adversary_beta", r.vrf->adversary_beta ? json(r.vrf->adversary_beta->hex()) : json(nullptr)}};
  }
  return j;
}

std::string serialize_report(const ScenarioReport& report) { return to_json(report).dump(2) + "\n"; }

}  // namespace forkbench
