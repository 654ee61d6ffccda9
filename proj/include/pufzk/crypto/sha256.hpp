#pragma once

#include <array>
#include <memory>

#include "pufzk/common/bytes.hpp"

struct evp_md_ctx_st;

namespace pufzk::crypto {

using Digest = std::array<std::uint8_t, 32>;

// Incremental SHA-256 over OpenSSL's EVP interface.
class Sha256 {
 public:
  Sha256();
  Sha256(Sha256&&) noexcept;
  Sha256& operator=(Sha256&&) noexcept;
  ~Sha256();

  Sha256& update(ByteSpan data);
  Sha256& update(std::string_view s) { return update(as_bytes(s)); }
  Digest finish();

 private:
  struct CtxDeleter {
    void operator()(evp_md_ctx_st* ctx) const;
  };
  std::unique_ptr<evp_md_ctx_st, CtxDeleter> ctx_;
};

Digest sha256(ByteSpan data);

// RFC 9380 expand_message_xmd with SHA-256.
Bytes expand_message_xmd(ByteSpan msg, std::string_view dst, std::size_t len_in_bytes);

}  // namespace pufzk::crypto
