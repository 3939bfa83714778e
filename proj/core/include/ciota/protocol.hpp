#pragma once

#include "ciota/agent.hpp"
#include "ciota/chain.hpp"

#include <memory>
#include <unordered_map>
#include <vector>

namespace ciota {

enum class Decision {
  replace_chain,
  replace_chain_and_adopt,
  discard,
  direct_message,
  dropped_rate_limited,
};

const char* to_string(Decision decision);

struct ReceiveOutcome {
  Decision decision = Decision::discard;
  /// Populated for direct_message: agents present in the received partial
  /// block but absent from the local one.
  std::vector<AgentId> dm_targets;
  /// True when the sender was reported (validity failure, or attestation
  /// failure beyond report_factor * alpha).
  bool reported = false;
  std::string reason;
};

/// How received chains are checked. The crypto policy performs real
/// signature validation and model attestation; the abstract policy treats
/// every chain built by an honest simulation as valid and every attestation
/// as passing, which is what makes protocol-scale simulation tractable.
class ReceivePolicy {
public:
  struct Attestation {
    bool pass = true;
    double dist = 0.0;
  };

  virtual ~ReceivePolicy() = default;

  virtual Validity structure(const Chain& chain) const = 0;
  virtual Validity last_block(const Chain& chain) const = 0;
  virtual Validity partial(const Chain& chain) const = 0;
  virtual Attestation attest_partial(const PartialBlock& partial,
                                     const AgentState& agent) const = 0;
  virtual void adopt(AgentState& agent, const Block& block) const = 0;
};

class AbstractReceivePolicy final : public ReceivePolicy {
public:
  Validity structure(const Chain&) const override { return Validity::pass(); }
  Validity last_block(const Chain&) const override { return Validity::pass(); }
  Validity partial(const Chain&) const override { return Validity::pass(); }
  Attestation attest_partial(const PartialBlock&,
                             const AgentState&) const override {
    return {};
  }
  void adopt(AgentState&, const Block&) const override {}
};

/// Full validation path. Validation results are memoized per immutable
/// block / partial-block object; a policy instance is therefore bound to a
/// single thread of control.
class CryptoReceivePolicy final : public ReceivePolicy {
public:
  CryptoReceivePolicy(std::size_t block_size, Keyring keyring,
                      std::shared_ptr<const SignatureProvider> signer)
      : block_size_(block_size),
        keyring_(std::move(keyring)),
        signer_(std::move(signer)) {}

  Validity structure(const Chain& chain) const override;
  Validity last_block(const Chain& chain) const override;
  Validity partial(const Chain& chain) const override;
  Attestation attest_partial(const PartialBlock& partial,
                             const AgentState& agent) const override;
  void adopt(AgentState& agent, const Block& block) const override;

private:
  std::size_t block_size_;
  Keyring keyring_;
  std::shared_ptr<const SignatureProvider> signer_;
  mutable std::unordered_map<const void*, Validity> block_memo_;
  mutable std::unordered_map<const void*, Validity> partial_memo_;
};

/// The receive-side decision procedure, applied when `agent` is handed a
/// chain by `sender`:
///
///  - shorter chains are discarded;
///  - longer chains replace the local chain when their last block is valid,
///    and the agent adopts that block's combined model as its new local
///    model (no attestation is applied to a valid closed block);
///  - equal-length chains replace the local chain when their partial block
///    is strictly longer (each side ignoring the receiving agent's own
///    record), valid, and its filtered combination attests against the
///    local model; when instead both partial blocks have equal effective
///    length but different agent sets, every k_dm-th such unused chain
///    triggers a direct message toward the agents this one is missing;
///  - anything else is discarded, and the sender is reported when validity
///    failed or attestation missed by at least report_factor * alpha.
///
/// When `agent.peer_budget` is positive, at most that many chains are
/// processed per share interval; the rest are dropped unread.
ReceiveOutcome receive_chain(AgentState& agent,
                             const std::shared_ptr<const Chain>& incoming,
                             const AgentId& sender, Timestamp now,
                             const ReceivePolicy& policy,
                             bool direct_messaging_enabled = true);

} // namespace ciota
