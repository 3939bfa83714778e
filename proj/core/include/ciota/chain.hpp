#pragma once

#include "ciota/digest.hpp"
#include "ciota/emm.hpp"
#include "ciota/signature.hpp"

#include <memory>
#include <string>
#include <vector>

namespace ciota {

/// Metadata shared by every record of one block.
struct BlockMeta {
  Digest prev_hash{}; // all zeros for the first block
  std::string app_id;
  std::string app_version;
  std::uint64_t block_index = 1; // 1-based position in the chain

  bool operator==(const BlockMeta&) const = default;
};

/// One agent's signed model contribution. The signature covers the block
/// metadata, the block counter and every model from the first record of the
/// block up to and including this one, so records cannot be reordered,
/// transplanted into another block, or altered after the fact.
struct Record {
  AgentId agent_id;
  std::string address; // peer locator, carried as opaque metadata
  std::shared_ptr<const FrequencyMatrix> model;
  Bytes signature;
};

/// An in-progress block: fewer than L records from distinct agents.
/// Immutable once constructed; growing it means building a new one.
class PartialBlock {
public:
  PartialBlock(BlockMeta meta, std::vector<Record> records);

  /// base plus one appended record, reusing base's sorted index instead of
  /// re-sorting; this is the hot path of every contribution.
  static PartialBlock extended(const PartialBlock& base, Record record);

  const BlockMeta& meta() const { return meta_; }
  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  bool contains(const AgentId& id) const;

  /// Record count minus one if the viewer has a record here. This is the
  /// length that matters when two agents compare partial blocks.
  std::size_t effective_length(const AgentId& viewer) const;

  /// Agent ids present here, sorted.
  const std::vector<AgentId>& sorted_ids() const { return sorted_ids_; }

  /// True when both partial blocks hold exactly the same agent ids. An
  /// order-independent fingerprint short-circuits the common
  /// different-lineage case without walking both id vectors.
  bool same_ids(const PartialBlock& other) const {
    return id_fingerprint_ == other.id_fingerprint_ &&
           sorted_ids_ == other.sorted_ids_;
  }

private:
  PartialBlock() = default;

  BlockMeta meta_;
  std::vector<Record> records_;
  std::vector<AgentId> sorted_ids_;
  std::uint64_t id_fingerprint_ = 0;
};

/// A closed block: exactly L records from distinct agents. The canonical
/// digest is fixed at construction time.
class Block {
public:
  Block(BlockMeta meta, std::vector<Record> records);

  const BlockMeta& meta() const { return meta_; }
  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const Digest& digest() const { return digest_; }

  bool contains(const AgentId& id) const;
  const std::vector<AgentId>& sorted_ids() const { return sorted_ids_; }

  /// The models of all records, in record order.
  std::vector<const FrequencyMatrix*> models() const;

private:
  BlockMeta meta_;
  std::vector<Record> records_;
  std::vector<AgentId> sorted_ids_;
  Digest digest_;
};

/// The ledger: closed blocks plus at most one partial block at the end.
/// Chain values are immutable; every mutation produces a new Chain that
/// shares structure with its predecessor.
class Chain {
public:
  /// An empty chain: no blocks, an empty partial block with index 1 and an
  /// all-zero previous hash.
  static Chain genesis(std::string app_id, std::string app_version);

  Chain(std::vector<std::shared_ptr<const Block>> blocks,
        std::shared_ptr<const PartialBlock> partial);

  /// Chain length counts full blocks only.
  std::size_t length() const { return blocks_.size(); }

  const std::vector<std::shared_ptr<const Block>>& blocks() const {
    return blocks_;
  }
  const std::shared_ptr<const Block>& last_block() const;
  const std::shared_ptr<const PartialBlock>& partial() const {
    return partial_;
  }

  /// Digest of the last closed block; all zeros when there is none.
  Digest last_digest() const;

  /// New chain whose partial block has `record` appended.
  Chain append_record(Record record) const;

private:
  std::vector<std::shared_ptr<const Block>> blocks_;
  std::shared_ptr<const PartialBlock> partial_;
};

/// If the partial block has reached `block_size` records, promote it to a
/// closed block and start a fresh empty partial with the next index and the
/// new block's digest as prev_hash. Otherwise returns the chain unchanged.
Chain close_if_full(const Chain& chain, std::size_t block_size);

struct Validity {
  bool ok = false;
  std::string reason;

  explicit operator bool() const { return ok; }
  static Validity pass() { return {true, {}}; }
  static Validity fail(std::string why) { return {false, std::move(why)}; }
};

/// Message a record's signature is computed over: the canonical encoding of
/// the block metadata, the block counter, and the canonical bytes of every
/// model in `models` (the prefix of the block up to and including the
/// signer's own model).
Bytes record_signing_message(
    const BlockMeta& meta,
    const std::vector<std::shared_ptr<const FrequencyMatrix>>& models);

/// Full block validation: exactly `block_size` records from distinct known
/// agents, each signature verifying over its prefix.
Validity validate_block(const Block& block, std::size_t block_size,
                        const Keyring& keyring,
                        const SignatureProvider& signer);

/// Same checks for a partial block, except the record count must be below
/// `block_size`.
Validity validate_partial(const PartialBlock& partial, std::size_t block_size,
                          const Keyring& keyring,
                          const SignatureProvider& signer);

/// Structural well-formedness of a whole chain, without signature checks:
/// consecutive block indices starting at 1, hash linkage between blocks,
/// partial block linked to the last block, record counts in range and no
/// duplicate agent within any block or the partial.
Validity chain_structure_ok(const Chain& chain, std::size_t block_size);

/// Broadcast-interval schedule that stretches the share period as the chain
/// grows: (1 - 2^(-lambda * m)) * (t_max - t_min) + t_min for chain length
/// m. Throws std::invalid_argument when t_min > t_max or lambda <= 0.
double interval_schedule(std::size_t chain_length, double lambda, double t_min,
                         double t_max);

} // namespace ciota
