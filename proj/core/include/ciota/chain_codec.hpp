#pragma once

#include "ciota/chain.hpp"

#include <span>

namespace ciota {

/// Chain wire format, version 1. All integers little-endian.
///
///   magic   "CIOTACHN"             8 bytes
///   version u32 = 1
///   blocks  u64 count, then per block:  u64 length prefix + block bytes
///   partial u8 flag, when 1:            u64 length prefix + partial bytes
///
/// Block bytes:   meta bytes, u64 record count, record bytes in order.
/// Partial bytes: same layout as a block.
/// Meta bytes:    prev_hash (32 raw), app_id (u32-prefixed), app_version
///                (u32-prefixed), block_index u64.
/// Record bytes:  agent_id (u32-prefixed), address (u32-prefixed), model
///                (u64-prefixed canonical model bytes), signature
///                (u32-prefixed).
Bytes serialize_chain(const Chain& chain);
Chain deserialize_chain(std::span<const std::uint8_t> bytes);

Bytes serialize_meta(const BlockMeta& meta);

/// Canonical bytes a block digest is computed over (meta + records).
Bytes block_body_bytes(const BlockMeta& meta, const std::vector<Record>& records);

} // namespace ciota
