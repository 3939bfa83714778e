#pragma once

#include "ciota/digest.hpp"
#include "ciota/errors.hpp"

#include <cstdint>
#include <cstring>
#include <span>
#include <string>

namespace ciota {

/// Little-endian byte buffer builder shared by the canonical codecs.
class ByteWriter {
public:
  void u8(std::uint8_t v) { buf_.push_back(v); }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back((v >> (8 * i)) & 0xff);
  }

  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back((v >> (8 * i)) & 0xff);
  }

  void raw(std::span<const std::uint8_t> data) {
    buf_.insert(buf_.end(), data.begin(), data.end());
  }

  void raw(const char* data, std::size_t n) {
    raw(std::span(reinterpret_cast<const std::uint8_t*>(data), n));
  }

  /// u32 length prefix followed by the bytes.
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }

  void blob(std::span<const std::uint8_t> data) {
    u32(static_cast<std::uint32_t>(data.size()));
    raw(data);
  }

  const Bytes& bytes() const { return buf_; }
  Bytes take() { return std::move(buf_); }

private:
  Bytes buf_;
};

/// Cursor over a byte span; every accessor throws DecodeError with the
/// current offset when the input is too short.
class ByteReader {
public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() { return take(1)[0]; }

  std::uint32_t u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  std::span<const std::uint8_t> raw(std::size_t n) { return take(n); }

  std::string str() {
    std::uint32_t n = u32();
    auto b = take(n);
    return std::string(reinterpret_cast<const char*>(b.data()), b.size());
  }

  Bytes blob() {
    std::uint32_t n = u32();
    auto b = take(n);
    return Bytes(b.begin(), b.end());
  }

  void expect_magic(const char* magic, std::size_t n, const char* what) {
    std::size_t at = pos_;
    auto b = take(n);
    if (std::memcmp(b.data(), magic, n) != 0) {
      throw DecodeError(at, std::string("bad magic, expected ") + what);
    }
  }

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

  void expect_done(const char* what) {
    if (!done()) {
      throw DecodeError(pos_, std::string("trailing bytes after ") + what);
    }
  }

private:
  std::span<const std::uint8_t> take(std::size_t n) {
    if (data_.size() - pos_ < n) {
      throw DecodeError(pos_, "unexpected end of input");
    }
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

} // namespace ciota
