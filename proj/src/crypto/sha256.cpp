#include "pufzk/crypto/sha256.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace pufzk::crypto {

void Sha256::CtxDeleter::operator()(evp_md_ctx_st* ctx) const { EVP_MD_CTX_free(ctx); }

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
  if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("EVP sha256 init failed");
  }
}

Sha256::Sha256(Sha256&&) noexcept = default;
Sha256& Sha256::operator=(Sha256&&) noexcept = default;
Sha256::~Sha256() = default;

Sha256& Sha256::update(ByteSpan data) {
  if (!data.empty() && EVP_DigestUpdate(ctx_.get(), data.data(), data.size()) != 1) {
    throw std::runtime_error("EVP sha256 update failed");
  }
  return *this;
}

Digest Sha256::finish() {
  Digest out{};
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx_.get(), out.data(), &len) != 1 || len != out.size()) {
    throw std::runtime_error("EVP sha256 final failed");
  }
  return out;
}

Digest sha256(ByteSpan data) { return Sha256().update(data).finish(); }

Bytes expand_message_xmd(ByteSpan msg, std::string_view dst, std::size_t len_in_bytes) {
  constexpr std::size_t kHashLen = 32;
  constexpr std::size_t kBlockLen = 64;
  const std::size_t ell = (len_in_bytes + kHashLen - 1) / kHashLen;
  if (ell > 255 || len_in_bytes > 65535 || dst.size() > 255) {
    throw std::invalid_argument("expand_message_xmd: parameters out of range");
  }
  Bytes dst_prime(dst.begin(), dst.end());
  dst_prime.push_back(static_cast<std::uint8_t>(dst.size()));

  const std::array<std::uint8_t, kBlockLen> z_pad{};
  const std::array<std::uint8_t, 3> lib_and_zero{static_cast<std::uint8_t>(len_in_bytes >> 8),
                                                 static_cast<std::uint8_t>(len_in_bytes), 0};
  const Digest b0 = Sha256().update(z_pad).update(msg).update(lib_and_zero).update(dst_prime).finish();

  Bytes out;
  out.reserve(ell * kHashLen);
  Digest prev{};
  for (std::size_t i = 1; i <= ell; ++i) {
    Digest chain = b0;
    if (i > 1) {
      for (std::size_t k = 0; k < kHashLen; ++k) chain[k] ^= prev[k];
    }
    const std::array<std::uint8_t, 1> idx{static_cast<std::uint8_t>(i)};
    prev = Sha256().update(chain).update(idx).update(dst_prime).finish();
    out.insert(out.end(), prev.begin(), prev.end());
  }
  out.resize(len_in_bytes);
  return out;
}

}  // namespace pufzk::crypto
