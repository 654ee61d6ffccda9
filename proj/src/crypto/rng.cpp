#include "pufzk/crypto/rng.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <stdexcept>

#include "pufzk/crypto/sha256.hpp"

namespace pufzk::crypto {

void Rng::CtxDeleter::operator()(evp_cipher_ctx_st* ctx) const { EVP_CIPHER_CTX_free(ctx); }

Rng::Rng(const std::array<std::uint8_t, 32>& key) : ctx_(EVP_CIPHER_CTX_new()) {
  // 16-byte IV: 32-bit block counter followed by a 96-bit nonce, all zero.
  const std::array<std::uint8_t, 16> iv{};
  if (!ctx_ || EVP_EncryptInit_ex(ctx_.get(), EVP_chacha20(), nullptr, key.data(), iv.data()) != 1) {
    throw std::runtime_error("EVP chacha20 init failed");
  }
}

Rng::Rng(Rng&&) noexcept = default;
Rng& Rng::operator=(Rng&&) noexcept = default;
Rng::~Rng() = default;

Rng Rng::from_key(const std::array<std::uint8_t, 32>& key) { return Rng(key); }

Rng Rng::from_seed(std::uint64_t seed) {
  ByteWriter w;
  w.raw(as_bytes("pufzk/rng/seed")).u64(seed);
  return Rng(sha256(w.bytes()));
}

Rng Rng::from_os_entropy() {
  std::array<std::uint8_t, 32> key{};
  if (RAND_bytes(key.data(), static_cast<int>(key.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  return Rng(key);
}

void Rng::refill() {
  const std::array<std::uint8_t, 256> zeros{};
  int len = 0;
  if (EVP_EncryptUpdate(ctx_.get(), buf_.data(), &len, zeros.data(), static_cast<int>(zeros.size())) != 1 ||
      len != static_cast<int>(buf_.size())) {
    throw std::runtime_error("EVP chacha20 keystream failed");
  }
  pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (pos_ == buf_.size()) refill();
    b = buf_[pos_++];
  }
}

Bytes Rng::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

std::uint64_t Rng::next_u64() {
  std::array<std::uint8_t, 8> b{};
  fill(b);
  std::uint64_t v = 0;
  for (auto x : b) v = v << 8 | x;
  return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

Rng Rng::fork(std::string_view label) {
  std::array<std::uint8_t, 32> material{};
  fill(material);
  return Rng(Sha256().update(material).update(label).finish());
}

}  // namespace pufzk::crypto
