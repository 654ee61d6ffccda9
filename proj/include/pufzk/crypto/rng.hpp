#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string_view>

#include "pufzk/common/bytes.hpp"

struct evp_cipher_ctx_st;

namespace pufzk::crypto {

// ChaCha20 keystream generator. Seeded instances are fully reproducible,
// which the demo transcripts and fixed-seed proof tests depend on.
// Not thread-safe; give each actor its own instance (see fork()).
class Rng {
 public:
  static Rng from_seed(std::uint64_t seed);
  static Rng from_key(const std::array<std::uint8_t, 32>& key);
  static Rng from_os_entropy();

  Rng(Rng&&) noexcept;
  Rng& operator=(Rng&&) noexcept;
  ~Rng();

  void fill(std::span<std::uint8_t> out);
  Bytes bytes(std::size_t n);
  std::uint64_t next_u64();
  // Uniform in [0, bound), bound > 0.
  std::uint64_t uniform(std::uint64_t bound);

  // Independent child stream keyed by this stream's output and a label.
  Rng fork(std::string_view label);

 private:
  explicit Rng(const std::array<std::uint8_t, 32>& key);
  void refill();

  struct CtxDeleter {
    void operator()(evp_cipher_ctx_st* ctx) const;
  };
  std::unique_ptr<evp_cipher_ctx_st, CtxDeleter> ctx_;
  std::array<std::uint8_t, 256> buf_{};
  std::size_t pos_ = 256;
};

}  // namespace pufzk::crypto
