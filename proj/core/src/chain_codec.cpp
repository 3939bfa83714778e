#include "ciota/chain_codec.hpp"

#include "ciota/model_codec.hpp"
#include "ciota/wire.hpp"

namespace ciota {

namespace {

constexpr char kMagic[] = "CIOTACHN";
constexpr std::uint32_t kVersion = 1;

void write_record(ByteWriter& w, const Record& record) {
  w.str(record.agent_id);
  w.str(record.address);
  const Bytes model = serialize_model(*record.model);
  w.u64(model.size());
  w.raw(model);
  w.blob(record.signature);
}

Record read_record(ByteReader& r) {
  Record record;
  record.agent_id = r.str();
  record.address = r.str();
  const std::uint64_t model_len = r.u64();
  const std::size_t model_at = r.offset();
  auto model_bytes = r.raw(model_len);
  try {
    record.model = std::make_shared<const FrequencyMatrix>(
        deserialize_model(model_bytes));
  } catch (const DecodeError& e) {
    throw DecodeError(model_at + e.offset(), "embedded model: " + std::string(e.what()));
  }
  record.signature = r.blob();
  return record;
}

BlockMeta read_meta(ByteReader& r) {
  BlockMeta meta;
  auto hash = r.raw(meta.prev_hash.size());
  std::copy(hash.begin(), hash.end(), meta.prev_hash.begin());
  meta.app_id = r.str();
  meta.app_version = r.str();
  meta.block_index = r.u64();
  return meta;
}

std::vector<Record> read_records(ByteReader& r) {
  const std::uint64_t count = r.u64();
  std::vector<Record> records;
  records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) records.push_back(read_record(r));
  return records;
}

} // namespace

Bytes serialize_meta(const BlockMeta& meta) {
  ByteWriter w;
  w.raw(meta.prev_hash);
  w.str(meta.app_id);
  w.str(meta.app_version);
  w.u64(meta.block_index);
  return w.take();
}

Bytes block_body_bytes(const BlockMeta& meta,
                       const std::vector<Record>& records) {
  ByteWriter w;
  w.raw(serialize_meta(meta));
  w.u64(records.size());
  for (const Record& record : records) write_record(w, record);
  return w.take();
}

Bytes serialize_chain(const Chain& chain) {
  ByteWriter w;
  w.raw(kMagic, 8);
  w.u32(kVersion);
  w.u64(chain.blocks().size());
  for (const auto& block : chain.blocks()) {
    const Bytes body = block_body_bytes(block->meta(), block->records());
    w.u64(body.size());
    w.raw(body);
  }
  w.u8(1); // chains always carry a partial block, possibly empty
  const Bytes body =
      block_body_bytes(chain.partial()->meta(), chain.partial()->records());
  w.u64(body.size());
  w.raw(body);
  return w.take();
}

Chain deserialize_chain(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic(kMagic, 8, "CIOTACHN");
  const std::size_t version_at = r.offset();
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw DecodeError(version_at,
                      "unsupported chain version " + std::to_string(version));
  }

  const std::uint64_t block_count = r.u64();
  std::vector<std::shared_ptr<const Block>> blocks;
  blocks.reserve(block_count);
  for (std::uint64_t i = 0; i < block_count; ++i) {
    const std::uint64_t body_len = r.u64();
    ByteReader body(r.raw(body_len));
    BlockMeta meta = read_meta(body);
    std::vector<Record> records = read_records(body);
    body.expect_done("block body");
    blocks.push_back(
        std::make_shared<const Block>(std::move(meta), std::move(records)));
  }

  const std::size_t flag_at = r.offset();
  if (r.u8() != 1) {
    throw DecodeError(flag_at, "missing partial block");
  }
  const std::uint64_t body_len = r.u64();
  ByteReader body(r.raw(body_len));
  BlockMeta meta = read_meta(body);
  std::vector<Record> records = read_records(body);
  body.expect_done("partial block body");
  r.expect_done("chain");
  return Chain(std::move(blocks), std::make_shared<const PartialBlock>(
                                      std::move(meta), std::move(records)));
}

} // namespace ciota
