#include "ciota/simnet.hpp"

#include "ciota/protocol.hpp"
#include "ciota/rng.hpp"
#include "ciota/traces.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace ciota {

Topology::Topology(std::size_t n,
                   std::vector<std::vector<std::uint32_t>> adjacency)
    : adjacency_(std::move(adjacency)) {
  if (adjacency_.size() != n) {
    throw std::invalid_argument("adjacency size does not match agent count");
  }
  for (std::uint32_t i = 0; i < adjacency_.size(); ++i) {
    auto& row = adjacency_[i];
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw std::invalid_argument("duplicate edge");
    }
    for (std::uint32_t j : row) {
      if (j == i) throw std::invalid_argument("self-loop");
      if (j >= n) throw std::invalid_argument("neighbor out of range");
      const auto& back = adjacency_[j];
      // the other row may not be sorted yet, so search linearly
      if (std::find(back.begin(), back.end(), i) == back.end()) {
        throw std::invalid_argument("asymmetric edge");
      }
    }
  }
}

std::size_t Topology::max_degree() const {
  std::size_t best = 0;
  for (const auto& row : adjacency_) best = std::max(best, row.size());
  return best;
}

std::size_t Topology::edge_count() const {
  std::size_t total = 0;
  for (const auto& row : adjacency_) total += row.size();
  return total / 2;
}

bool Topology::connected() const {
  if (adjacency_.empty()) return true;
  std::vector<char> seen(adjacency_.size(), 0);
  std::deque<std::uint32_t> queue{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!queue.empty()) {
    const std::uint32_t node = queue.front();
    queue.pop_front();
    for (std::uint32_t next : adjacency_[node]) {
      if (!seen[next]) {
        seen[next] = 1;
        ++visited;
        queue.push_back(next);
      }
    }
  }
  return visited == adjacency_.size();
}

DegreeStats Topology::degree_stats() const {
  std::vector<std::size_t> degrees;
  degrees.reserve(adjacency_.size());
  for (const auto& row : adjacency_) degrees.push_back(row.size());
  std::sort(degrees.begin(), degrees.end());

  DegreeStats stats;
  if (degrees.empty()) return stats;
  stats.min = degrees.front();
  stats.max = degrees.back();
  const std::size_t n = degrees.size();
  stats.median = (n % 2 == 1)
                     ? static_cast<double>(degrees[n / 2])
                     : (static_cast<double>(degrees[n / 2 - 1]) +
                        static_cast<double>(degrees[n / 2])) /
                           2.0;
  double sum = 0.0;
  for (std::size_t d : degrees) sum += static_cast<double>(d);
  stats.mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (std::size_t d : degrees) {
    const double delta = static_cast<double>(d) - stats.mean;
    sq += delta * delta;
  }
  stats.stddev = std::sqrt(sq / static_cast<double>(n));
  return stats;
}

Topology gen_complete(std::size_t n) {
  if (n < 2) throw std::invalid_argument("complete graph needs n >= 2");
  std::vector<std::vector<std::uint32_t>> adjacency(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    adjacency[i].reserve(n - 1);
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j != i) adjacency[i].push_back(j);
    }
  }
  return Topology(n, std::move(adjacency));
}

namespace {

void add_edge(std::vector<std::vector<std::uint32_t>>& adjacency,
              std::uint32_t a, std::uint32_t b) {
  adjacency[a].push_back(b);
  adjacency[b].push_back(a);
}

bool has_edge(const std::vector<std::vector<std::uint32_t>>& adjacency,
              std::uint32_t a, std::uint32_t b) {
  const auto& row = adjacency[a];
  return std::find(row.begin(), row.end(), b) != row.end();
}

} // namespace

Topology gen_watts_strogatz(std::size_t n, std::size_t neighbors,
                            double rewire_p, std::uint64_t seed) {
  if (neighbors >= n) {
    throw std::invalid_argument("lattice degree must be below n");
  }
  if (neighbors == 0 || n < 3) {
    throw std::invalid_argument("watts-strogatz needs n >= 3, neighbors >= 1");
  }
  if (rewire_p < 0.0 || rewire_p > 1.0) {
    throw std::invalid_argument("rewire probability must be in [0,1]");
  }
  const std::size_t half = (neighbors + 1) / 2; // odd degrees round up

  for (;; ++seed) {
    Rng rng(seed);
    std::vector<std::vector<std::uint32_t>> adjacency(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::size_t d = 1; d <= half; ++d) {
        add_edge(adjacency, i, static_cast<std::uint32_t>((i + d) % n));
      }
    }
    // shortcut per lattice edge with probability p; the lattice edge stays
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::size_t d = 1; d <= half; ++d) {
        if (rng.unit() >= rewire_p) continue;
        for (int attempt = 0; attempt < 8; ++attempt) {
          const auto target = static_cast<std::uint32_t>(rng.below(n));
          if (target == i || has_edge(adjacency, i, target)) continue;
          add_edge(adjacency, i, target);
          break;
        }
      }
    }
    Topology topo(n, std::move(adjacency));
    if (topo.connected()) return topo;
  }
}

Topology gen_barabasi_albert(std::size_t n, std::size_t attachment,
                             std::uint64_t seed) {
  if (attachment < 1 || n <= attachment) {
    throw std::invalid_argument("barabasi-albert needs 1 <= attachment < n");
  }
  Rng rng(seed);
  std::vector<std::vector<std::uint32_t>> adjacency(n);
  // endpoints of every edge; sampling uniformly from this list is
  // equivalent to degree-weighted sampling
  std::vector<std::uint32_t> endpoints;
  endpoints.reserve(2 * n * attachment);

  for (std::uint32_t node = static_cast<std::uint32_t>(attachment); node < n;
       ++node) {
    std::vector<std::uint32_t> targets;
    if (endpoints.empty()) {
      for (std::uint32_t t = 0; t < attachment; ++t) targets.push_back(t);
    } else {
      while (targets.size() < attachment) {
        const std::uint32_t pick = endpoints[rng.below(endpoints.size())];
        if (std::find(targets.begin(), targets.end(), pick) == targets.end()) {
          targets.push_back(pick);
        }
      }
    }
    for (std::uint32_t t : targets) {
      add_edge(adjacency, node, t);
      endpoints.push_back(node);
      endpoints.push_back(t);
    }
  }
  return Topology(n, std::move(adjacency));
}

bool deadlock_oracle(const std::vector<AgentChainSnapshot>& before,
                     const std::vector<AgentChainSnapshot>& after,
                     std::size_t block_size) {
  if (before.size() != after.size()) {
    throw std::invalid_argument("snapshots cover different agent sets");
  }
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i] != after[i]) return false;
    if (after[i].partial_ids.size() >= block_size) return false;
  }
  return true;
}

namespace {

AgentId sim_agent_id(std::uint32_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "a%05u", index);
  return AgentId(buf);
}

struct Delivery {
  std::shared_ptr<const Chain> chain;
  std::uint32_t from = 0;
  std::uint32_t to = 0;
};

/// Abstract-fidelity contribution: a record with a shared empty model and
/// no signature. Returns true when the block closed.
bool abstract_share(AgentState& agent,
                    const std::shared_ptr<const FrequencyMatrix>& empty_model) {
  if (agent.chain->partial()->contains(agent.id)) return false;
  Record record;
  record.agent_id = agent.id;
  record.address = agent.address;
  record.model = empty_model;
  Chain grown = agent.chain->append_record(std::move(record));
  Chain closed = close_if_full(grown, agent.proto.block_size);
  const bool did_close = closed.length() > agent.chain->length();
  agent.chain = std::make_shared<const Chain>(std::move(closed));
  agent.note_partial_changed();
  return did_close;
}

std::vector<std::pair<State, State>> default_poison(const GroundTruthModel& gt) {
  // redirect mass from every ground-truth region into one region the
  // application never visits
  const State bad = *gt.chain.states.rbegin() + 1;
  std::vector<std::pair<State, State>> poison;
  for (State s : gt.chain.states) poison.emplace_back(s, bad);
  return poison;
}

} // namespace

ScenarioPlan apply_scenario(const SimConfig& config, const GroundTruthModel& gt,
                            std::vector<AgentState>& agents, Rng& rng) {
  const std::size_t n = agents.size();
  ScenarioPlan plan;
  plan.join_epoch.assign(n, 1);
  plan.disable_direct_messaging =
      config.scenario.kind == Scenario::Kind::no_direct_messaging;

  if (config.scenario.kind == Scenario::Kind::late_join) {
    for (std::size_t i = 0; i < config.scenario.late_count && i < n; ++i) {
      plan.join_epoch[n - 1 - i] = config.scenario.join_epoch;
    }
  }

  const auto poisoned = static_cast<std::size_t>(
      std::ceil(config.scenario.poisoned_fraction * static_cast<double>(n)));
  if (config.scenario.kind == Scenario::Kind::poisoned_agents && poisoned > 0) {
    auto poison = config.scenario.poison_transitions.empty()
                      ? default_poison(gt)
                      : config.scenario.poison_transitions;
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t i = 0; i < poisoned && i < n; ++i) {
      for (const auto& [from, to] : poison) {
        agents[order[i]].local_model.add(from, to, config.scenario.poison_count);
      }
    }
  }
  return plan;
}

SimMetrics run_simulation(const SimConfig& config, const Topology& topology) {
  const std::size_t n = config.n_agents;
  if (n == 0 || topology.size() != n) {
    throw std::invalid_argument("topology does not match n_agents");
  }
  if (config.block_size == 0 || config.block_size > n) {
    throw std::invalid_argument("block size must be in [1, n_agents]");
  }
  if (!topology.connected()) {
    throw std::invalid_argument("topology must form a single connected component");
  }

  const bool concrete =
      config.fidelity == ModelFidelity::concrete_model ||
      config.scenario.kind == Scenario::Kind::poisoned_agents;

  Rng rng(config.seed);

  ModelParams params;
  params.p_a = config.p_a;
  params.alpha = config.alpha;
  params.window_k = 16; // agents do not monitor traces inside the simulator
  params.t_grace = 0.0;
  ProtocolParams proto;
  proto.block_size = config.block_size;
  proto.k_dm = config.k_dm;
  proto.report_factor = config.report_factor;
  proto.share_interval = config.share_interval;

  std::vector<AgentState> agents;
  agents.reserve(n);
  std::unordered_map<AgentId, std::uint32_t> index_of;
  for (std::uint32_t i = 0; i < n; ++i) {
    agents.emplace_back(sim_agent_id(i), params, proto, "sim-app", "1");
    agents.back().peer_budget = config.peer_budget;
    index_of.emplace(agents.back().id, i);
  }

  // model setup and policy
  auto signer = std::make_shared<KeyedHashSigner>();
  std::unique_ptr<ReceivePolicy> policy;
  auto empty_model = std::make_shared<const FrequencyMatrix>();

  const GroundTruthModel gt = make_uniform_model(
      config.gt_regions, config.gt_out_degree, config.seed, 256);
  if (concrete) {
    Keyring keyring;
    for (auto& agent : agents) {
      agent.keys = signer->keypair_from_seed(
          seed_from_label("sim-key:" + agent.id));
      keyring.emplace(agent.id, agent.keys.public_key);
    }
    for (auto& agent : agents) {
      Rng walk = Rng::derive(config.seed, 0x7261 + index_of[agent.id]);
      agent.local_model = sample_model(gt, config.train_steps, walk);
    }
    policy = std::make_unique<CryptoReceivePolicy>(config.block_size,
                                                   std::move(keyring), signer);
  } else {
    policy = std::make_unique<AbstractReceivePolicy>();
  }

  const ScenarioPlan plan = apply_scenario(config, gt, agents, rng);
  const bool direct_messaging =
      config.direct_messaging && !plan.disable_direct_messaging;

  std::vector<char> active(n, 1);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (plan.join_epoch[i] > 1) active[i] = 0;
  }

  SimMetrics metrics;
  metrics.degree = topology.degree_stats();

  std::size_t max_chain_length = 0;
  std::vector<const void*> prev_partials(n, nullptr);
  std::vector<std::size_t> prev_lengths(n, 0);
  std::deque<Delivery> pending;
  std::vector<std::pair<double, std::uint32_t>> order;
  order.reserve(n);
  bool done = false;

  for (std::uint32_t epoch = 1; epoch <= config.max_epochs && !done; ++epoch) {
    metrics.epochs_run = epoch;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (!active[i] && plan.join_epoch[i] == epoch) active[i] = 1;
    }

    const double base = (static_cast<double>(epoch) - 1.0) * config.share_interval;
    order.clear();
    for (std::uint32_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      order.emplace_back(
          base + rng.unit() * config.jitter * config.share_interval, i);
    }
    std::sort(order.begin(), order.end());

    for (const auto& [when, firing] : order) {
      AgentState& agent = agents[firing];
      const bool closed = concrete ? share_step(agent, when, *signer)
                                   : abstract_share(agent, empty_model);
      // count a close only when it extends the longest chain seen anywhere,
      // so competing closes of the same index are one event
      if (closed && agent.chain->length() > max_chain_length) {
        max_chain_length = agent.chain->length();
        metrics.epochs_to_close.push_back(epoch);
        if (max_chain_length >= config.blocks_to_close) {
          done = true;
          break;
        }
      }

      const auto& all_neighbors = topology.neighbors(firing);
      if (config.fanout > 0 && config.fanout < all_neighbors.size()) {
        for (std::uint32_t to : rng.sample(all_neighbors, config.fanout)) {
          pending.push_back({agent.chain, firing, to});
        }
      } else {
        for (std::uint32_t to : all_neighbors) {
          pending.push_back({agent.chain, firing, to});
        }
      }
      metrics.messages_sent += pending.size();

      std::size_t cascade_guard = 100 * n * config.block_size + 100000;
      while (!pending.empty()) {
        Delivery d = std::move(pending.front());
        pending.pop_front();
        if (!active[d.to]) continue;
        AgentState& receiver = agents[d.to];
        ReceiveOutcome outcome =
            receive_chain(receiver, d.chain, agents[d.from].id, when, *policy,
                          direct_messaging);
        if (outcome.reported) ++metrics.reports;
        if (outcome.decision == Decision::direct_message) {
          for (const AgentId& target : outcome.dm_targets) {
            auto it = index_of.find(target);
            if (it == index_of.end()) continue;
            pending.push_back({receiver.chain, d.to, it->second});
            ++metrics.messages_sent;
          }
        }
        if (--cascade_guard == 0) {
          throw std::runtime_error("delivery cascade failed to terminate");
        }
      }
    }
    pending.clear();

    if (done) break;

    std::uint32_t max_effective = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto& pb = agents[i].chain->partial();
      max_effective = std::max(
          max_effective,
          static_cast<std::uint32_t>(pb->effective_length(agents[i].id)));
    }
    metrics.max_effective_by_epoch.push_back(max_effective);

    // deadlock predicate: no partial block changed this epoch and none full.
    // Only meaningful once the whole population is online; a pending late
    // join will still change the picture.
    const bool all_online =
        std::all_of(active.begin(), active.end(), [](char a) { return a != 0; });
    bool deadlock = all_online;
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto* pb = agents[i].chain->partial().get();
      const std::size_t size = pb->size();
      if (active[i] &&
          (pb != prev_partials[i] || size >= config.block_size ||
           agents[i].chain->length() != prev_lengths[i])) {
        deadlock = false;
      }
      prev_partials[i] = pb;
      prev_lengths[i] = agents[i].chain->length();
    }
    if (epoch == 1) deadlock = false; // no previous epoch to compare against
    if (deadlock) {
      metrics.deadlock_detected = true;
      for (const auto& agent : agents) {
        metrics.deadlock_partials.push_back(agent.chain->partial()->sorted_ids());
      }
      break;
    }
  }

  if (!metrics.deadlock_detected && max_chain_length < config.blocks_to_close &&
      metrics.epochs_run >= config.max_epochs) {
    // ran out of budget without progress: surface the partial states
    metrics.deadlock_detected = true;
    for (const auto& agent : agents) {
      metrics.deadlock_partials.push_back(agent.chain->partial()->sorted_ids());
    }
  }

  metrics.agents.reserve(n);
  for (const auto& agent : agents) {
    metrics.agents.push_back(
        {static_cast<std::uint32_t>(agent.chain->length()),
         static_cast<std::uint32_t>(agent.chain->partial()->size())});
  }
  return metrics;
}

} // namespace ciota
