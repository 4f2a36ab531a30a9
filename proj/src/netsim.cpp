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

#include "forkbench/netsim.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

namespace forkbench {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::Producer: return "Producer";
    case Role::Validator: return "Validator";
    case Role::Adversary: return "Adversary";
  }
  return "?";
}

Role role_from_string(std::string_view s) {
  if (s == "Producer") return Role::Producer;
  if (s == "Validator") return Role::Validator;
  if (s == "Adversary") return Role::Adversary;
  throw std::invalid_argument("unknown role: " + std::string(s));
}

std::string_view to_string(MutationKind m) {
  switch (m) {
    case MutationKind::None: return "None";
    case MutationKind::StripWitness: return "StripWitness";
    case MutationKind::AppendDuplicateLastTx: return "AppendDuplicateLastTx";
  }
  return "?";
}

MutationKind mutation_kind_from_string(std::string_view s) {
  if (s == "None") return MutationKind::None;
  if (s == "StripWitness") return MutationKind::StripWitness;
  if (s == "AppendDuplicateLastTx") return MutationKind::AppendDuplicateLastTx;
  throw std::invalid_argument("unknown mutation: " + std::string(s));
}

std::string_view event_kind(const Event& e) {
  static constexpr std::string_view kNames[] = {"BlockAccepted",  "BlockRejected",     "ForkDetected",
                                                "DoubleSpend",    "DivergenceRefused", "LeaderElected"};
  return kNames[e.index()];
}

Block adversary_mutate(const Block& block, const Mutation& mutation) {
  Block out = block;
  switch (mutation.kind) {
    case MutationKind::None:
      break;
    case MutationKind::StripWitness:
      if (mutation.tx_index >= out.txs.size()) {
        throw BadIndex("StripWitness: tx index " + std::to_string(mutation.tx_index) +
                       " out of range for " + std::to_string(out.txs.size()) + " txs");
      }
      out.txs[mutation.tx_index].witness.verification_script.clear();
      break;
    case MutationKind::AppendDuplicateLastTx:
      if (out.txs.empty()) throw BadIndex("AppendDuplicateLastTx: block has no transactions");
      out.txs.push_back(out.txs.back());
      break;
  }
  return out;
}

namespace {

uint64_t mix(uint64_t a, uint64_t b) {
  Bytes buf;
  put_le64(buf, a);
  put_le64(buf, b);
  return get_le64(hash256(buf).view());
}

void validate_spec(const WorldSpec& spec) {
  std::set<std::string> ids;
  size_t producers = 0;
  size_t adversaries = 0;
  for (const NodeSpec& n : spec.nodes) {
    if (n.id.empty()) throw ScenarioError("node with empty id");
    if (!ids.insert(n.id).second) throw ScenarioError("duplicate node id: " + n.id);
    if (n.role == Role::Producer) ++producers;
    if (n.role == Role::Adversary) ++adversaries;
  }
  if (producers != 1) throw ScenarioError("exactly one Producer required, found " + std::to_string(producers));
  if (adversaries > 1) throw ScenarioError("at most one Adversary allowed");

  for (size_t b = 0; b < spec.blocks.size(); ++b) {
    if (spec.blocks[b].empty()) throw ScenarioError("block " + std::to_string(b) + " has no transactions");
  }
  for (const Delivery& d : spec.deliveries) {
    if (d.block >= spec.blocks.size()) {
      throw ScenarioError("delivery references unknown block " + std::to_string(d.block));
    }
    auto it = std::find_if(spec.nodes.begin(), spec.nodes.end(),
                           [&](const NodeSpec& n) { return n.id == d.to; });
    if (it == spec.nodes.end()) throw ScenarioError("delivery to unknown node: " + d.to);
    if (it->role != Role::Validator) throw ScenarioError("deliveries must target validators: " + d.to);
    if (d.mutation.kind != MutationKind::None && adversaries == 0) {
      throw ScenarioError("mutated delivery to " + d.to + " but no Adversary node");
    }
  }
  if (spec.vrf && spec.vrf->rounds == 0) throw ScenarioError("vrf.rounds must be positive");
}

LedgerState genesis_state(const WorldSpec& spec) {
  LedgerState g;
  g.verification_script = spec.verification_script;
  for (const GenesisBalance& b : spec.genesis) {
    g.balances[BalanceKey{b.token, b.account}] += b.amount;
  }
  return g;
}

void deliver(NodeRecord& node, const Block& block, std::vector<Event>& trace) {
  const Digest digest = block_digest(block.header);
  const uint64_t height = block.header.height;

  ValidationResult verdict = validate_block(block, node.state, node.spec.cfg);
  if (!verdict.valid()) {
    trace.push_back(BlockRejected{node.spec.id, digest, height, std::string(to_string(*verdict.failure))});
    return;
  }

  PersistResult result = persist_block(block, node.state, node.spec.cfg, node.effective_profile);
  if (const auto* refused = std::get_if<Refused>(&result)) {
    if (refused->reason == RefusalReason::DivergentExecution) {
      trace.push_back(DivergenceRefused{node.spec.id, height, refused->expected, refused->got});
    } else {
      trace.push_back(BlockRejected{node.spec.id, digest, height, std::string(to_string(refused->reason))});
    }
    return;
  }

  auto& committed = std::get<Committed>(result);
  node.state = std::move(committed.state);
  node.state_digest_at[height] = node.state.digest();
  node.receipts_at[height] = std::move(committed.receipts);
  trace.push_back(BlockAccepted{node.spec.id, digest, height});
}

// Fisher-Yates driven by raw engine output; std::shuffle's algorithm is
// implementation-defined and would break cross-platform trace identity.
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

void run_vrf_rounds(const WorldSpec& spec, uint64_t seed, WorldState& world) {
  const VrfRounds& cfg = *spec.vrf;
  const auto& params = vrf::kToyGroup;

  struct Participant {
    std::string id;
    uint64_t x;
    bool adversary;
  };
  std::vector<Participant> participants;
  for (size_t i = 0; i < spec.nodes.size(); ++i) {
    const NodeSpec& n = spec.nodes[i];
    if (n.role == Role::Adversary) {
      participants.push_back({n.id, cfg.adversary_key % params.q, true});
    } else {
      participants.push_back({n.id, 1 + mix(seed, i) % (params.q - 1), false});
    }
  }

  VrfStats stats;
  stats.rounds = cfg.rounds;
  std::set<std::string> leaders;
  std::set<Digest> adversary_betas;
  Digest prev = world.nodes.empty() ? Digest{} : world.nodes.front().state.tip;

  for (uint64_t round = 0; round < cfg.rounds; ++round) {
    const Bytes alpha = vrf::round_alpha(round, prev);
    std::vector<vrf::Candidate> candidates;
    for (const Participant& p : participants) {
      vrf::ProveOutput out = vrf::vrf_prove(p.x, alpha, params);
      candidates.push_back({p.id, vrf::mod_pow(params.g, p.x, params.p), out.beta, out.proof});
      if (p.adversary) {
        adversary_betas.insert(out.beta);
        stats.adversary_beta = out.beta;
        if (vrf::validate_public_key(candidates.back().y, cfg.policy, params) == vrf::KeyCheck::Ok &&
            vrf::vrf_verify(candidates.back().y, alpha, out.proof, params)) {
          ++stats.adversary_eligible_rounds;
        }
      }
    }

    const std::string leader = vrf::select_leader(candidates, round, prev, cfg.policy, params);
    auto winner = std::find_if(candidates.begin(), candidates.end(),
                               [&](const vrf::Candidate& c) { return c.id == leader; });
    world.trace.push_back(LeaderElected{round, leader, winner->beta});
    leaders.insert(leader);
    for (const Participant& p : participants) {
      if (p.adversary && p.id == leader) ++stats.adversary_wins;
    }

    Bytes link = alpha;
    append(link, winner->beta.view());
    prev = hash256(link);
  }

  stats.distinct_leaders = leaders.size();
  stats.adversary_distinct_betas = adversary_betas.size();
  world.vrf = stats;
}

}  // namespace

PlatformProfile effective_profile(const PlatformProfile& profile, uint64_t seed) {
  PlatformProfile out = profile;
  out.uninit_seed = mix(profile.uninit_seed, seed);
  out.oob_seed = mix(profile.oob_seed, seed);
  return out;
}

WorldState run_world(const WorldSpec& spec, uint64_t seed) {
  validate_spec(spec);

  WorldState world;
  const LedgerState genesis = genesis_state(spec);
  size_t producer_index = 0;
  for (size_t i = 0; i < spec.nodes.size(); ++i) {
    const NodeSpec& n = spec.nodes[i];
    if (n.role == Role::Producer) producer_index = i;
    world.nodes.push_back(NodeRecord{n, effective_profile(n.profile, seed), genesis, {}, {}});
  }

  std::mt19937_64 rng(seed);
  for (size_t b = 0; b < spec.blocks.size(); ++b) {
    NodeRecord& producer = world.nodes[producer_index];
    Block block = make_block(spec.blocks[b], producer.state, producer.spec.id, producer.spec.cfg,
                             producer.effective_profile);
    deliver(producer, block, world.trace);

    std::vector<Delivery> pending;
    if (spec.deliveries.empty()) {
      for (const NodeSpec& n : spec.nodes) {
        if (n.role == Role::Validator) pending.push_back(Delivery{b, n.id, {}});
      }
    } else {
      for (const Delivery& d : spec.deliveries) {
        if (d.block == b) pending.push_back(d);
      }
    }
    seeded_shuffle(pending, rng);

    for (const Delivery& d : pending) {
      auto node = std::find_if(world.nodes.begin(), world.nodes.end(),
                               [&](const NodeRecord& r) { return r.spec.id == d.to; });
      Block shipped;
      try {
        shipped = adversary_mutate(block, d.mutation);
      } catch (const BadIndex& e) {
        throw ScenarioError(std::string("adversary schedule: ") + e.what());
      }
      deliver(*node, shipped, world.trace);
    }
  }

  if (spec.vrf) run_vrf_rounds(spec, seed, world);

  for (Event& e : detect_forks(world)) world.trace.push_back(std::move(e));
  for (Event& e : detect_double_spend(world)) world.trace.push_back(std::move(e));
  return world;
}

std::vector<Event> detect_forks(const WorldState& world) {
  std::map<uint64_t, std::set<Digest>> by_height;
  for (const NodeRecord& node : world.nodes) {
    if (node.spec.role == Role::Adversary) continue;
    for (const auto& [height, digest] : node.state_digest_at) by_height[height].insert(digest);
  }
  std::vector<Event> events;
  for (const auto& [height, digests] : by_height) {
    if (digests.size() > 1) events.push_back(ForkDetected{height, {digests.begin(), digests.end()}});
  }
  return events;
}

std::vector<Event> detect_double_spend(const WorldState& world) {
  // (height, token, debited account) -> node index -> ordered (tx, credits).
  using GroupKey = std::tuple<uint64_t, std::string, std::string>;
  using CreditEntry = std::pair<std::string, uint64_t>;
  using TxCredits = std::pair<Digest, std::vector<CreditEntry>>;
  std::map<GroupKey, std::map<size_t, std::vector<TxCredits>>> groups;

  for (size_t n = 0; n < world.nodes.size(); ++n) {
    const NodeRecord& node = world.nodes[n];
    if (node.spec.role == Role::Adversary) continue;
    for (const auto& [height, receipts] : node.receipts_at) {
      for (const TxReceipt& r : receipts) {
        std::map<std::pair<std::string, std::string>, std::vector<CreditEntry>> per_source;
        for (const Credit& c : r.credits) per_source[{c.token, c.from}].push_back({c.to, c.amount});
        for (auto& [source, entries] : per_source) {
          groups[GroupKey{height, source.first, source.second}][n].push_back({r.tx_id, std::move(entries)});
        }
      }
    }
  }

  std::vector<Event> events;
  for (const auto& [key, per_node] : groups) {
    if (per_node.size() < 2) continue;
    const auto& reference = per_node.begin()->second;
    bool conflict = std::any_of(per_node.begin(), per_node.end(),
                                [&](const auto& entry) { return entry.second != reference; });
    if (!conflict) continue;

    // First position at which the nodes' credit sequences part ways.
    size_t longest = 0;
    for (const auto& [n, seq] : per_node) longest = std::max(longest, seq.size());
    std::optional<Digest> origin;
    for (size_t i = 0; i < longest && !origin; ++i) {
      const TxCredits* first = nullptr;
      bool differs = false;
      for (const auto& [n, seq] : per_node) {
        const TxCredits* here = i < seq.size() ? &seq[i] : nullptr;
        if (!first && here) first = here;
        if (!here || (first && *here != *first)) differs = true;
      }
      if (differs && first) origin = first->first;
    }

    DoubleSpend ds;
    ds.height = std::get<0>(key);
    ds.token = std::get<1>(key);
    ds.origin_tx = origin.value_or(Digest{});
    for (const auto& [n, seq] : per_node) {
      for (const auto& [tx, entries] : seq) {
        for (const auto& [account, amount] : entries) ds.credited.emplace_back(world.nodes[n].spec.id, account);
      }
    }
    events.push_back(std::move(ds));
  }
  return events;
}

}  // namespace forkbench
