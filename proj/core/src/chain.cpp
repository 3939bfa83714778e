#include "ciota/chain.hpp"

#include "ciota/chain_codec.hpp"
#include "ciota/model_codec.hpp"
#include "ciota/wire.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace ciota {

namespace {

std::vector<AgentId> sorted_ids_of(const std::vector<Record>& records) {
  std::vector<AgentId> ids;
  ids.reserve(records.size());
  for (const Record& r : records) ids.push_back(r.agent_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool ids_contain(const std::vector<AgentId>& sorted, const AgentId& id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

bool has_duplicate(const std::vector<AgentId>& sorted) {
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

Validity check_records(const BlockMeta& meta, const std::vector<Record>& records,
                       const Keyring& keyring, const SignatureProvider& signer) {
  std::vector<AgentId> seen;
  seen.reserve(records.size());
  std::vector<std::shared_ptr<const FrequencyMatrix>> prefix;
  prefix.reserve(records.size());
  for (const Record& record : records) {
    if (record.model == nullptr) {
      return Validity::fail("record without model from " + record.agent_id);
    }
    if (std::find(seen.begin(), seen.end(), record.agent_id) != seen.end()) {
      return Validity::fail("duplicate record from " + record.agent_id);
    }
    seen.push_back(record.agent_id);

    auto key = keyring.find(record.agent_id);
    if (key == keyring.end()) {
      return Validity::fail("unknown signer " + record.agent_id);
    }
    prefix.push_back(record.model);
    const Bytes message = record_signing_message(meta, prefix);
    if (!signer.verify(key->second, message, record.signature)) {
      return Validity::fail("bad signature from " + record.agent_id);
    }
  }
  return Validity::pass();
}

} // namespace

PartialBlock::PartialBlock(BlockMeta meta, std::vector<Record> records)
    : meta_(std::move(meta)),
      records_(std::move(records)),
      sorted_ids_(sorted_ids_of(records_)) {
  for (const AgentId& id : sorted_ids_) {
    id_fingerprint_ += std::hash<AgentId>{}(id);
  }
}

PartialBlock PartialBlock::extended(const PartialBlock& base, Record record) {
  PartialBlock grown;
  grown.meta_ = base.meta_;
  grown.records_.reserve(base.records_.size() + 1);
  grown.records_.insert(grown.records_.end(), base.records_.begin(),
                        base.records_.end());
  grown.sorted_ids_.reserve(base.sorted_ids_.size() + 1);
  const auto at = std::upper_bound(base.sorted_ids_.begin(),
                                   base.sorted_ids_.end(), record.agent_id);
  grown.sorted_ids_.insert(grown.sorted_ids_.end(), base.sorted_ids_.begin(), at);
  grown.sorted_ids_.push_back(record.agent_id);
  grown.sorted_ids_.insert(grown.sorted_ids_.end(), at, base.sorted_ids_.end());
  grown.id_fingerprint_ =
      base.id_fingerprint_ + std::hash<AgentId>{}(record.agent_id);
  grown.records_.push_back(std::move(record));
  return grown;
}

bool PartialBlock::contains(const AgentId& id) const {
  return ids_contain(sorted_ids_, id);
}

std::size_t PartialBlock::effective_length(const AgentId& viewer) const {
  return records_.size() - (contains(viewer) ? 1 : 0);
}

Block::Block(BlockMeta meta, std::vector<Record> records)
    : meta_(std::move(meta)),
      records_(std::move(records)),
      sorted_ids_(sorted_ids_of(records_)),
      digest_(sha256(block_body_bytes(meta_, records_))) {}

bool Block::contains(const AgentId& id) const {
  return ids_contain(sorted_ids_, id);
}

std::vector<const FrequencyMatrix*> Block::models() const {
  std::vector<const FrequencyMatrix*> out;
  out.reserve(records_.size());
  for (const Record& r : records_) out.push_back(r.model.get());
  return out;
}

Chain Chain::genesis(std::string app_id, std::string app_version) {
  BlockMeta meta;
  meta.prev_hash = zero_digest();
  meta.app_id = std::move(app_id);
  meta.app_version = std::move(app_version);
  meta.block_index = 1;
  return Chain({}, std::make_shared<const PartialBlock>(std::move(meta),
                                                        std::vector<Record>{}));
}

Chain::Chain(std::vector<std::shared_ptr<const Block>> blocks,
             std::shared_ptr<const PartialBlock> partial)
    : blocks_(std::move(blocks)), partial_(std::move(partial)) {
  if (partial_ == nullptr) {
    throw std::invalid_argument("chain needs a partial block");
  }
}

const std::shared_ptr<const Block>& Chain::last_block() const {
  if (blocks_.empty()) {
    throw std::out_of_range("chain has no closed block");
  }
  return blocks_.back();
}

Digest Chain::last_digest() const {
  return blocks_.empty() ? zero_digest() : blocks_.back()->digest();
}

Chain Chain::append_record(Record record) const {
  return Chain(blocks_, std::make_shared<const PartialBlock>(
                            PartialBlock::extended(*partial_, std::move(record))));
}

Chain close_if_full(const Chain& chain, std::size_t block_size) {
  const auto& partial = chain.partial();
  if (partial->size() < block_size) return chain;

  auto closed =
      std::make_shared<const Block>(partial->meta(), partial->records());
  std::vector<std::shared_ptr<const Block>> blocks = chain.blocks();
  blocks.push_back(closed);

  BlockMeta next;
  next.prev_hash = closed->digest();
  next.app_id = partial->meta().app_id;
  next.app_version = partial->meta().app_version;
  next.block_index = partial->meta().block_index + 1;
  return Chain(std::move(blocks), std::make_shared<const PartialBlock>(
                                      std::move(next), std::vector<Record>{}));
}

Bytes record_signing_message(
    const BlockMeta& meta,
    const std::vector<std::shared_ptr<const FrequencyMatrix>>& models) {
  ByteWriter w;
  w.raw(serialize_meta(meta));
  w.u64(meta.block_index); // the replay counter, spelled out explicitly
  for (const auto& model : models) {
    const Bytes bytes = serialize_model(*model);
    w.u64(bytes.size());
    w.raw(bytes);
  }
  return w.take();
}

Validity validate_block(const Block& block, std::size_t block_size,
                        const Keyring& keyring,
                        const SignatureProvider& signer) {
  if (block.size() != block_size) {
    return Validity::fail("block has " + std::to_string(block.size()) +
                          " records, expected " + std::to_string(block_size));
  }
  return check_records(block.meta(), block.records(), keyring, signer);
}

Validity validate_partial(const PartialBlock& partial, std::size_t block_size,
                          const Keyring& keyring,
                          const SignatureProvider& signer) {
  if (partial.size() >= block_size) {
    return Validity::fail("partial block has " +
                          std::to_string(partial.size()) +
                          " records, limit is " +
                          std::to_string(block_size - 1));
  }
  return check_records(partial.meta(), partial.records(), keyring, signer);
}

Validity chain_structure_ok(const Chain& chain, std::size_t block_size) {
  Digest prev = zero_digest();
  std::uint64_t index = 1;
  for (const auto& block : chain.blocks()) {
    if (block->meta().block_index != index) {
      return Validity::fail("block index " +
                            std::to_string(block->meta().block_index) +
                            " out of sequence");
    }
    if (block->meta().prev_hash != prev) {
      return Validity::fail("broken hash linkage at block " +
                            std::to_string(index));
    }
    if (block->size() != block_size) {
      return Validity::fail("closed block with wrong record count");
    }
    if (has_duplicate(block->sorted_ids())) {
      return Validity::fail("duplicate agent in block " +
                            std::to_string(index));
    }
    prev = block->digest();
    ++index;
  }

  const auto& partial = chain.partial();
  if (partial->meta().block_index != index) {
    return Validity::fail("partial block index mismatch");
  }
  if (partial->meta().prev_hash != prev) {
    return Validity::fail("partial block not linked to last block");
  }
  if (partial->size() >= block_size) {
    return Validity::fail("partial block at or above block size");
  }
  if (has_duplicate(partial->sorted_ids())) {
    return Validity::fail("duplicate agent in partial block");
  }
  return Validity::pass();
}

double interval_schedule(std::size_t chain_length, double lambda, double t_min,
                         double t_max) {
  if (t_min > t_max) {
    throw std::invalid_argument("t_min must not exceed t_max");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("lambda must be positive");
  }
  const double m = static_cast<double>(chain_length);
  return (1.0 - std::exp2(-lambda * m)) * (t_max - t_min) + t_min;
}

} // namespace ciota
