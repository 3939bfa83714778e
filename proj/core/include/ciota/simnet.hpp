#pragma once

#include "ciota/agent.hpp"
#include "ciota/emm.hpp"
#include "ciota/signature.hpp"
#include "ciota/traces.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ciota {

struct DegreeStats {
  std::size_t min = 0;
  std::size_t max = 0;
  double median = 0.0;
  double mean = 0.0;
  double stddev = 0.0;

  bool operator==(const DegreeStats&) const = default;
};

/// Undirected connectivity graph between agents. Adjacency lists are kept
/// sorted; construction rejects self-loops and asymmetric edges.
class Topology {
public:
  Topology(std::size_t n, std::vector<std::vector<std::uint32_t>> adjacency);

  std::size_t size() const { return adjacency_.size(); }
  const std::vector<std::uint32_t>& neighbors(std::uint32_t node) const {
    return adjacency_[node];
  }
  std::size_t degree(std::uint32_t node) const {
    return adjacency_[node].size();
  }
  std::size_t max_degree() const;
  std::size_t edge_count() const;
  bool connected() const;
  DegreeStats degree_stats() const;

private:
  std::vector<std::vector<std::uint32_t>> adjacency_;
};

/// Every pair of agents adjacent. n must be at least 2.
Topology gen_complete(std::size_t n);

/// Small-world graph: a ring lattice where each node is joined to its
/// `neighbors` nearest nodes (odd values round up to the next even lattice
/// degree), plus a random shortcut added per lattice edge with probability
/// rewire_p. Shortcuts are added rather than moved, so no node ever drops
/// below the lattice degree. Regenerates with seed+1 until connected.
Topology gen_watts_strogatz(std::size_t n, std::size_t neighbors,
                            double rewire_p, std::uint64_t seed);

/// Preferential-attachment graph: each new node attaches to `attachment`
/// existing nodes sampled proportionally to their degree. attachment = 1
/// grows a tree.
Topology gen_barabasi_albert(std::size_t n, std::size_t attachment,
                             std::uint64_t seed);

/// How much model machinery the simulation runs. Abstract agents carry
/// empty models, skip signatures and treat every attestation as passing,
/// which is what makes protocol-scale runs (hundreds of thousands of
/// deliveries) affordable. Concrete agents train real frequency matrices
/// and go through full validation, attestation and adoption.
enum class ModelFidelity { abstract_model, concrete_model };

struct Scenario {
  enum class Kind { none, poisoned_agents, late_join, no_direct_messaging };

  Kind kind = Kind::none;
  /// poisoned_agents: fraction of agents whose local model carries extra
  /// malicious transitions (forces concrete fidelity).
  double poisoned_fraction = 0.0;
  std::vector<std::pair<State, State>> poison_transitions; // derived if empty
  Count poison_count = 200; // added observations per poison transition
  /// late_join: this many agents stay offline until join_epoch.
  std::size_t late_count = 0;
  std::uint32_t join_epoch = 1;
};

struct SimConfig {
  std::size_t n_agents = 0;
  std::size_t block_size = 0;   // L; must not exceed n_agents
  double share_interval = 60.0; // T
  double jitter = 0.1;          // share-time noise as a fraction of T
  std::size_t fanout = 0;       // b; 0 sends to every neighbor
  std::uint64_t seed = 1;
  int k_dm = 1;
  double alpha = 0.05;
  double p_a = 0.25;
  double report_factor = 2.0;
  bool direct_messaging = true;
  std::size_t max_epochs = 10000; // safety bound
  std::size_t blocks_to_close = 1;
  int peer_budget = 0; // received chains processed per interval; 0 = unlimited
  ModelFidelity fidelity = ModelFidelity::abstract_model;
  Scenario scenario;

  // concrete fidelity: shared ground truth and per-agent training length
  std::size_t gt_regions = 8;
  std::size_t gt_out_degree = 2;
  std::size_t train_steps = 4000;
};

/// Content snapshot of one agent's chain, used by the deadlock oracle.
struct AgentChainSnapshot {
  std::size_t blocks = 0;
  std::vector<AgentId> partial_ids; // sorted

  bool operator==(const AgentChainSnapshot&) const = default;
};

/// The literal deadlock predicate: true when every agent's partial block is
/// unchanged between the two snapshots and every partial block still has
/// fewer than block_size records. Throws when the snapshots cover different
/// agent sets.
bool deadlock_oracle(const std::vector<AgentChainSnapshot>& before,
                     const std::vector<AgentChainSnapshot>& after,
                     std::size_t block_size);

struct SimMetrics {
  std::vector<std::uint32_t> epochs_to_close; // epoch number per closed block
  std::uint32_t epochs_run = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t reports = 0; // receive-side rejections that were reported
  DegreeStats degree;
  bool deadlock_detected = false;
  /// Largest effective partial-block length across agents at each epoch
  /// boundary; non-decreasing until a block closes.
  std::vector<std::uint32_t> max_effective_by_epoch;

  struct AgentSummary {
    std::uint32_t blocks = 0;
    std::uint32_t partial_records = 0;

    bool operator==(const AgentSummary&) const = default;
  };
  std::vector<AgentSummary> agents;

  /// Partial-block membership per agent at the moment a deadlock was
  /// declared; empty otherwise.
  std::vector<std::vector<AgentId>> deadlock_partials;

  bool operator==(const SimMetrics&) const = default;
};

/// Per-agent consequences of a scenario, applied before the run starts.
struct ScenarioPlan {
  /// Epoch (1-based) at which each agent comes online.
  std::vector<std::uint32_t> join_epoch;
  /// Scenario demanded that direct messaging be disabled.
  bool disable_direct_messaging = false;
};

/// Mutate freshly initialized agents according to the configured scenario:
/// poisoned agents get extra malicious transitions stamped into their local
/// models (derived against `gt` when none are given), late joiners get a
/// delayed join epoch. A zero-effect scenario leaves agents and the random
/// stream untouched.
ScenarioPlan apply_scenario(const SimConfig& config, const GroundTruthModel& gt,
                            std::vector<AgentState>& agents, Rng& rng);

/// Run one deterministic simulation: every epoch each active agent fires a
/// share event at a jittered time, contributes its record if absent,
/// broadcasts its chain to min(fanout, degree) neighbors, and deliveries /
/// direct messages are processed in event order. The run ends when
/// blocks_to_close blocks have closed, a deadlock is detected, or
/// max_epochs elapse.
SimMetrics run_simulation(const SimConfig& config, const Topology& topology);

} // namespace ciota
