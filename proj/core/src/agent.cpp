#include "ciota/agent.hpp"

#include <sstream>

namespace ciota {

const char* to_string(Alert::Kind kind) {
  switch (kind) {
    case Alert::Kind::anomaly: return "anomaly";
    case Alert::Kind::rejected_block: return "rejected_block";
    case Alert::Kind::rejected_agent: return "rejected_agent";
  }
  return "unknown";
}

std::string alert_csv_header() {
  return "ts,agent_id,kind,score,src_state,dst_state,detail";
}

std::string alert_csv_line(const Alert& alert) {
  std::ostringstream out;
  out << alert.timestamp << ',' << alert.agent_id << ','
      << to_string(alert.kind) << ',' << alert.score << ',' << alert.src_state
      << ',' << alert.dst_state << ',';
  // commas inside the detail field would break the row
  for (char c : alert.detail) out << (c == ',' ? ';' : c);
  return out.str();
}

AgentState::AgentState(AgentId id_, ModelParams params_, ProtocolParams proto_,
                       std::string app_id, std::string app_version,
                       Timestamp start)
    : id(std::move(id_)),
      address("agent://" + id),
      window(params_.window_k),
      params(params_),
      proto(proto_),
      chain(std::make_shared<const Chain>(
          Chain::genesis(std::move(app_id), std::move(app_version)))),
      start_time(start),
      interval_start(start) {
  params.validate();
}

bool in_grace(const AgentState& agent, Timestamp now) {
  return now - agent.start_time < agent.params.t_grace;
}

std::vector<Alert> monitor_batch(AgentState& agent,
                                 std::span<const std::uint64_t> addresses,
                                 Timestamp now) {
  std::vector<Alert> alerts;
  const bool grace = in_grace(agent, now);
  for (std::uint64_t address : addresses) {
    const State next =
        state_of_address(address, agent.params.region_size_bytes);
    if (!agent.current_state.has_value()) {
      // very first observation: nothing to score yet
      agent.current_state = next;
      continue;
    }
    const State current = *agent.current_state;
    agent.window.push(agent.local_model.probability(current, next));
    const double score = *agent.window.mean();
    const bool anomalous = !grace && score < agent.params.p_thr;
    if (agent.observation_sink) {
      agent.observation_sink({now, current, next, score, grace, anomalous});
    }
    if (anomalous) {
      Alert alert;
      alert.kind = Alert::Kind::anomaly;
      alert.agent_id = agent.id;
      alert.timestamp = now;
      alert.score = score;
      alert.src_state = current;
      alert.dst_state = next;
      agent.emit(alert);
      alerts.push_back(std::move(alert));
      // an anomalous transition must not teach the model
    } else {
      agent.local_model.record(current, next);
    }
    agent.current_state = next;
  }
  return alerts;
}

void adopt_global_unchecked(AgentState& agent, const Block& block) {
  agent.local_model = combine(block.models(), agent.params.p_a);
  agent.window.clear();
}

bool adopt_global(AgentState& agent, const Block& block, const Keyring& keyring,
                  const SignatureProvider& signer) {
  if (!validate_block(block, agent.proto.block_size, keyring, signer)) {
    return false;
  }
  adopt_global_unchecked(agent, block);
  return true;
}

std::optional<PartialBlock> contribute_record(const AgentState& agent,
                                              const PartialBlock& partial,
                                              Timestamp now,
                                              const SignatureProvider& signer) {
  if (in_grace(agent, now)) return std::nullopt;
  if (partial.contains(agent.id)) return std::nullopt;

  std::vector<std::shared_ptr<const FrequencyMatrix>> models;
  models.reserve(partial.size() + 1);
  for (const Record& r : partial.records()) models.push_back(r.model);
  auto own = std::make_shared<const FrequencyMatrix>(agent.local_model);
  models.push_back(own);

  Record record;
  record.agent_id = agent.id;
  record.address = agent.address;
  record.model = std::move(own);
  record.signature =
      signer.sign(agent.keys.secret, record_signing_message(partial.meta(), models));
  return PartialBlock::extended(partial, std::move(record));
}

bool share_step(AgentState& agent, Timestamp now,
                const SignatureProvider& signer) {
  auto grown = contribute_record(agent, *agent.chain->partial(), now, signer);
  if (!grown.has_value()) return false;

  Chain appended(agent.chain->blocks(),
                 std::make_shared<const PartialBlock>(std::move(*grown)));
  Chain closed = close_if_full(appended, agent.proto.block_size);
  const bool did_close = closed.length() > agent.chain->length();
  agent.chain = std::make_shared<const Chain>(std::move(closed));
  agent.note_partial_changed();
  return did_close;
}

} // namespace ciota
