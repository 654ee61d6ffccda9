#include "pufzk/common/bytes.hpp"

namespace pufzk {

std::string to_hex(ByteSpan data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

namespace {
int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw DecodeError("odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

ByteWriter& ByteWriter::u8(std::uint8_t v) {
  buf_.push_back(v);
  return *this;
}

ByteWriter& ByteWriter::u32(std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
  return *this;
}

ByteWriter& ByteWriter::u64(std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
  return *this;
}

ByteWriter& ByteWriter::raw(ByteSpan data) {
  append(buf_, data);
  return *this;
}

ByteWriter& ByteWriter::field(ByteSpan data) {
  if (data.size() > UINT32_MAX) throw std::length_error("field too large");
  u32(static_cast<std::uint32_t>(data.size()));
  return raw(data);
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint32_t ByteReader::u32() {
  auto b = raw(4);
  std::uint32_t v = 0;
  for (auto x : b) v = v << 8 | x;
  return v;
}

std::uint64_t ByteReader::u64() {
  auto b = raw(8);
  std::uint64_t v = 0;
  for (auto x : b) v = v << 8 | x;
  return v;
}

ByteSpan ByteReader::raw(std::size_t n) {
  if (n > remaining()) throw DecodeError("truncated input");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

ByteSpan ByteReader::field() { return raw(u32()); }

std::string ByteReader::string_field() {
  auto f = field();
  return {f.begin(), f.end()};
}

void ByteReader::expect_done() const {
  if (!done()) throw DecodeError("trailing bytes");
}

}  // namespace pufzk
