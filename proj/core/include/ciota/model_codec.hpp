#pragma once

#include "ciota/digest.hpp"
#include "ciota/emm.hpp"

#include <span>

namespace ciota {

/// Canonical model byte format, version 1:
///
///   magic   "CIOTAEMM"                      8 bytes
///   version u32 little-endian = 1           4 bytes
///   entries u64 little-endian               8 bytes
///   entry   (row u64, col u64, count u64)   24 bytes each, sorted by
///                                           (row, col), little-endian
///
/// The encoding is canonical: equal models always produce byte-identical
/// output, which is what makes hashing and signing of models meaningful.
Bytes serialize_model(const FrequencyMatrix& model);

/// Inverse of serialize_model. Throws DecodeError (with byte offset) on
/// malformed input, including unsorted or duplicate entries.
FrequencyMatrix deserialize_model(std::span<const std::uint8_t> bytes);

} // namespace ciota
