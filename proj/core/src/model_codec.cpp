#include "ciota/model_codec.hpp"

#include "ciota/wire.hpp"

namespace ciota {

namespace {
constexpr char kMagic[] = "CIOTAEMM";
constexpr std::uint32_t kVersion = 1;
} // namespace

Bytes serialize_model(const FrequencyMatrix& model) {
  ByteWriter w;
  w.raw(kMagic, 8);
  w.u32(kVersion);
  w.u64(model.entry_count());
  // std::map iteration is already sorted by (row, col)
  for (const auto& [key, count] : model.entries()) {
    w.u64(key.first);
    w.u64(key.second);
    w.u64(count);
  }
  return w.take();
}

FrequencyMatrix deserialize_model(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic(kMagic, 8, "CIOTAEMM");
  const std::size_t version_at = r.offset();
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw DecodeError(version_at, "unsupported model version " +
                                      std::to_string(version));
  }
  const std::uint64_t entries = r.u64();

  FrequencyMatrix model;
  bool have_prev = false;
  std::pair<State, State> prev{};
  for (std::uint64_t i = 0; i < entries; ++i) {
    const std::size_t entry_at = r.offset();
    const State row = r.u64();
    const State col = r.u64();
    const Count count = r.u64();
    if (count == 0) {
      throw DecodeError(entry_at, "zero count entry");
    }
    const std::pair<State, State> key{row, col};
    if (have_prev && !(prev < key)) {
      throw DecodeError(entry_at, "entries not strictly sorted by (row, col)");
    }
    prev = key;
    have_prev = true;
    model.add(row, col, count);
  }
  r.expect_done("model");
  return model;
}

} // namespace ciota
