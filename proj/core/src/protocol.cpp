#include "ciota/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace ciota {

const char* to_string(Decision decision) {
  switch (decision) {
    case Decision::replace_chain: return "replace_chain";
    case Decision::replace_chain_and_adopt: return "replace_chain_and_adopt";
    case Decision::discard: return "discard";
    case Decision::direct_message: return "direct_message";
    case Decision::dropped_rate_limited: return "dropped_rate_limited";
  }
  return "unknown";
}

Validity CryptoReceivePolicy::structure(const Chain& chain) const {
  return chain_structure_ok(chain, block_size_);
}

Validity CryptoReceivePolicy::last_block(const Chain& chain) const {
  if (chain.blocks().empty()) return Validity::fail("no closed block");
  const Block* block = chain.last_block().get();
  auto it = block_memo_.find(block);
  if (it != block_memo_.end()) return it->second;
  Validity v = validate_block(*block, block_size_, keyring_, *signer_);
  block_memo_.emplace(block, v);
  return v;
}

Validity CryptoReceivePolicy::partial(const Chain& chain) const {
  const PartialBlock* pb = chain.partial().get();
  auto it = partial_memo_.find(pb);
  if (it != partial_memo_.end()) return it->second;
  Validity v = validate_partial(*pb, block_size_, keyring_, *signer_);
  partial_memo_.emplace(pb, v);
  return v;
}

ReceivePolicy::Attestation CryptoReceivePolicy::attest_partial(
    const PartialBlock& partial, const AgentState& agent) const {
  std::vector<const FrequencyMatrix*> models;
  models.reserve(partial.size());
  for (const Record& r : partial.records()) models.push_back(r.model.get());
  const FrequencyMatrix combined = combine(models, agent.params.p_a);
  const double dist = distance(agent.local_model, combined);
  return {dist < agent.params.alpha, dist};
}

void CryptoReceivePolicy::adopt(AgentState& agent, const Block& block) const {
  adopt_global_unchecked(agent, block);
}

namespace {

void report_sender(AgentState& agent, Alert::Kind kind, const AgentId& sender,
                   Timestamp now, const std::string& detail) {
  Alert alert;
  alert.kind = kind;
  alert.agent_id = agent.id;
  alert.timestamp = now;
  alert.sender = sender;
  alert.detail = detail;
  agent.emit(alert);
}

} // namespace

ReceiveOutcome receive_chain(AgentState& agent,
                             const std::shared_ptr<const Chain>& incoming,
                             const AgentId& sender, Timestamp now,
                             const ReceivePolicy& policy,
                             bool direct_messaging_enabled) {
  ReceiveOutcome out;

  if (agent.peer_budget > 0) {
    const double interval = agent.proto.share_interval;
    if (interval > 0 && now - agent.interval_start >= interval) {
      const double elapsed = std::floor((now - agent.interval_start) / interval);
      agent.interval_start += elapsed * interval;
      agent.processed_in_interval = 0;
    }
    if (agent.processed_in_interval >= agent.peer_budget) {
      out.decision = Decision::dropped_rate_limited;
      out.reason = "peer budget exhausted for this interval";
      return out;
    }
    ++agent.processed_in_interval;
  }

  if (Validity v = policy.structure(*incoming); !v) {
    report_sender(agent, Alert::Kind::rejected_block, sender, now, v.reason);
    out.decision = Decision::discard;
    out.reported = true;
    out.reason = "malformed chain: " + v.reason;
    return out;
  }

  const std::size_t local_len = agent.chain->length();
  const std::size_t incoming_len = incoming->length();

  if (incoming_len < local_len) {
    out.reason = "shorter chain";
    return out;
  }

  if (incoming_len > local_len) {
    if (Validity v = policy.last_block(*incoming); !v) {
      out.reason = "longer chain with invalid last block: " + v.reason;
      return out;
    }
    agent.chain = incoming;
    agent.note_partial_changed();
    policy.adopt(agent, *incoming->last_block());
    out.decision = Decision::replace_chain_and_adopt;
    return out;
  }

  // equal chain length: the partial blocks decide
  const auto& local_pb = agent.chain->partial();
  const auto& incoming_pb = incoming->partial();
  if (local_pb.get() == incoming_pb.get()) {
    out.reason = "identical partial block";
    return out;
  }

  const std::size_t local_eff = local_pb->effective_length(agent.id);
  const std::size_t incoming_eff = incoming_pb->effective_length(agent.id);

  if (incoming_eff > local_eff) {
    if (Validity v = policy.partial(*incoming); !v) {
      report_sender(agent, Alert::Kind::rejected_block, sender, now, v.reason);
      out.reported = true;
      out.reason = "invalid partial block: " + v.reason;
      return out;
    }
    const auto attestation = policy.attest_partial(*incoming_pb, agent);
    if (!attestation.pass) {
      const double bar = agent.proto.report_factor * agent.params.alpha;
      if (attestation.dist >= bar) {
        report_sender(agent, Alert::Kind::rejected_agent, sender, now,
                      "attestation distance " + std::to_string(attestation.dist));
        out.reported = true;
      }
      out.reason = "attestation failed at distance " +
                   std::to_string(attestation.dist);
      return out;
    }
    agent.chain = incoming;
    agent.note_partial_changed();
    out.decision = Decision::replace_chain;
    return out;
  }

  if (incoming_eff == local_eff && !incoming_pb->same_ids(*local_pb)) {
    if (agent.considered_conflicts.contains(incoming_pb.get())) {
      out.reason = "conflict already considered";
      return out;
    }
    if (Validity v = policy.partial(*incoming); !v) {
      report_sender(agent, Alert::Kind::rejected_block, sender, now, v.reason);
      out.reported = true;
      out.reason = "invalid partial block: " + v.reason;
      return out;
    }
    agent.considered_conflicts.insert(incoming_pb.get());
    if (direct_messaging_enabled) {
      ++agent.equal_unused_seen;
      if (agent.equal_unused_seen >= agent.proto.k_dm) {
        agent.equal_unused_seen = 0;
        const auto& in_ids = incoming_pb->sorted_ids();
        const auto& local_ids = local_pb->sorted_ids();
        std::set_difference(in_ids.begin(), in_ids.end(), local_ids.begin(),
                            local_ids.end(),
                            std::back_inserter(out.dm_targets));
        std::erase(out.dm_targets, agent.id); // never message oneself
        if (!out.dm_targets.empty()) {
          out.decision = Decision::direct_message;
          return out;
        }
      }
    }
    out.reason = "equal-length conflict, no action";
    return out;
  }

  out.reason = "not longer than local knowledge";
  return out;
}

} // namespace ciota
