#pragma once

#include "ciota/chain.hpp"
#include "ciota/emm.hpp"
#include "ciota/signature.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace ciota {

using Timestamp = double; // seconds, or abstract time units in simulation

/// Collaboration-protocol parameters, distinct from the detector's
/// ModelParams.
struct ProtocolParams {
  std::size_t block_size = 20;  // records per closed block (L)
  int k_dm = 1;                 // equal-length conflicts before direct message
  double report_factor = 2.0;   // report when distance >= report_factor*alpha
  double share_interval = 60.0; // seconds between broadcasts (T)
};

struct Alert {
  enum class Kind { anomaly, rejected_block, rejected_agent };

  Kind kind = Kind::anomaly;
  AgentId agent_id;
  Timestamp timestamp = 0.0;
  // anomaly evidence
  double score = 0.0;
  State src_state = 0;
  State dst_state = 0;
  // rejection evidence
  AgentId sender;
  std::string detail;
};

const char* to_string(Alert::Kind kind);

/// One CSV line in the alert log format:
/// ts,agent_id,kind,score,src_state,dst_state,detail
std::string alert_csv_line(const Alert& alert);
std::string alert_csv_header();

/// One scored transition, as seen by the monitor loop.
struct Observation {
  Timestamp timestamp = 0.0;
  State src_state = 0;
  State dst_state = 0;
  double score = 0.0;
  bool in_grace = false;
  bool alerted = false;
};

/// The full state of one device's agent. Owned by a single logical task;
/// the monitor / share / receive activities must not interleave within one
/// operation.
struct AgentState {
  AgentId id;
  std::string address; // peer locator published in records
  KeyPair keys;

  FrequencyMatrix local_model;
  ScoreWindow window;
  std::optional<State> current_state;

  ModelParams params;
  ProtocolParams proto;

  std::shared_ptr<const Chain> chain;
  Timestamp start_time = 0.0;

  /// Received chains processed per share interval before further ones are
  /// dropped unread. Zero disables the limit.
  int peer_budget = 0;

  /// Optional alert sink, invoked in addition to alert return values.
  std::function<void(const Alert&)> alert_sink;
  /// Optional per-transition observer; receives every scored transition.
  std::function<void(const Observation&)> observation_sink;

  // receive-side bookkeeping
  int equal_unused_seen = 0;
  Timestamp interval_start = 0.0;
  int processed_in_interval = 0;
  // equal-length conflicts already considered against the current local
  // partial block. Counting (and direct-messaging) the same unchanged pair
  // twice would let two agents bounce messages forever; the set is cleared
  // whenever the local partial block changes, which also bounds its size.
  std::unordered_set<const void*> considered_conflicts;

  void note_partial_changed() {
    equal_unused_seen = 0;
    considered_conflicts.clear();
  }

  AgentState(AgentId id, ModelParams params, ProtocolParams proto,
             std::string app_id, std::string app_version,
             Timestamp start_time = 0.0);

  void emit(const Alert& alert) const {
    if (alert_sink) alert_sink(alert);
  }
};

/// True while the agent is still inside its initial training period.
bool in_grace(const AgentState& agent, Timestamp now);

/// Feed a batch of observed jump addresses through the detector. Each
/// address is mapped to its region; the transition probability from the
/// current region is pushed into the score window. Once the grace period
/// has elapsed, a window mean below p_thr raises an anomaly alert and the
/// offending transition is NOT learned; otherwise the transition is
/// recorded into the local model. The current region always advances.
std::vector<Alert> monitor_batch(AgentState& agent,
                                 std::span<const std::uint64_t> addresses,
                                 Timestamp now);

/// Replace the local model with the filtered combination of the models in a
/// closed block. The score window is cleared so the fresh model is not
/// judged against probabilities computed under the old one; the current
/// region is preserved. Returns false (and leaves the agent untouched) when
/// the block fails validation.
bool adopt_global(AgentState& agent, const Block& block, const Keyring& keyring,
                  const SignatureProvider& signer);

/// Unvalidated variant used where the caller has already established block
/// validity.
void adopt_global_unchecked(AgentState& agent, const Block& block);

/// Add this agent's model to the partial block, if the grace period has
/// elapsed and no record of this agent is present yet. Returns the grown
/// partial block, or nullopt when nothing was contributed.
std::optional<PartialBlock> contribute_record(const AgentState& agent,
                                              const PartialBlock& partial,
                                              Timestamp now,
                                              const SignatureProvider& signer);

/// Contribute to the agent's own chain and close the block when full.
/// Returns true when a block was closed by this call.
bool share_step(AgentState& agent, Timestamp now,
                const SignatureProvider& signer);

} // namespace ciota
