#pragma once

// Pairing-friendly group arithmetic over BLS12-381.
//
// G1 and G2 are written additively (P + Q, P * s); Gt multiplicatively
// (a * b, a.pow(s)). All types are immutable values and safe to share
// between threads.
//
// Canonical encodings (see docs/FORMATS.md):
//   Scalar  32 bytes, big-endian, value < r
//   G1      48 bytes, compressed x with flag bits (compressed | infinity | sign)
//   G2      96 bytes, compressed x = (x.c1 || x.c0) with the same flag bits
//   Gt     576 bytes, twelve big-endian Fp coefficients

#include <string_view>

#include "pufzk/common/bytes.hpp"
#include "pufzk/crypto/rng.hpp"
#include "pufzk/group/curve.hpp"

namespace pufzk::group {

// Domain-separation tag for the hash functions. Every usage site gets its own.
struct DomainTag {
  std::string_view value;
};

namespace tags {
inline constexpr DomainTag kLiteralAuthBase{"PUFZK-V1_LITERAL-AUTH_BLS12381G1_XMD:SHA-256_TAI_"};
inline constexpr DomainTag kLiteralTxBase{"PUFZK-V1_LITERAL-TX_BLS12381G1_XMD:SHA-256_TAI_"};
inline constexpr DomainTag kLiteralChallenge{"PUFZK-V1_LITERAL-CHALLENGE_XMD:SHA-256_FR_"};
inline constexpr DomainTag kAuthChallenge{"PUFZK-V1_AUTH-CHALLENGE_XMD:SHA-256_FR_"};
inline constexpr DomainTag kTxChallenge{"PUFZK-V1_TX-CHALLENGE_XMD:SHA-256_FR_"};
inline constexpr DomainTag kResponseScalar{"PUFZK-V1_PUF-RESPONSE_XMD:SHA-256_FR_"};
inline constexpr DomainTag kSignature{"PUFZK-V1_SIGNATURE_BLS12381G1_XMD:SHA-256_TAI_"};
}  // namespace tags

class Scalar {
 public:
  static constexpr std::size_t kEncodedSize = 32;
  using Encoding = std::array<std::uint8_t, kEncodedSize>;

  Scalar() = default;
  static Scalar zero() { return {}; }
  static Scalar one() { return Scalar(Fr::one()); }
  static Scalar from_u64(std::uint64_t v) { return Scalar(Fr::from_u64(v)); }
  static Scalar random(crypto::Rng& rng);
  // Throws DecodeError unless exactly 32 bytes encoding a value < r.
  static Scalar from_bytes(ByteSpan be);
  static Scalar from_bytes_reduce(ByteSpan be) { return Scalar(Fr::from_bytes_reduce(be)); }

  Encoding to_bytes() const { return v_.to_bytes(); }
  UInt<4> to_uint() const { return v_.to_canonical(); }
  bool is_zero() const { return v_.is_zero(); }
  Scalar inverse() const { return Scalar(v_.inverse()); }

  friend bool operator==(const Scalar&, const Scalar&) = default;
  friend Scalar operator+(const Scalar& a, const Scalar& b) { return Scalar(a.v_ + b.v_); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return Scalar(a.v_ - b.v_); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return Scalar(a.v_ * b.v_); }
  Scalar operator-() const { return Scalar(-v_); }

 private:
  explicit Scalar(const Fr& v) : v_(v) {}
  Fr v_;
};

class G1 {
 public:
  static constexpr std::size_t kEncodedSize = 48;
  using Encoding = std::array<std::uint8_t, kEncodedSize>;

  G1() = default;
  explicit G1(const G1Point& p) : p_(p) {}
  static G1 identity() { return {}; }
  static const G1& generator();
  // Throws DecodeError for non-canonical, off-curve or off-subgroup input.
  static G1 from_bytes(ByteSpan data);

  Encoding to_bytes() const;
  bool is_identity() const { return p_.is_identity(); }
  bool in_subgroup() const;
  const G1Point& point() const { return p_; }

  friend bool operator==(const G1& a, const G1& b) { return a.p_ == b.p_; }
  friend G1 operator+(const G1& a, const G1& b) { return G1(a.p_ + b.p_); }
  friend G1 operator-(const G1& a, const G1& b) { return G1(a.p_ - b.p_); }
  G1 operator-() const { return G1(-p_); }
  friend G1 operator*(const G1& a, const Scalar& s) { return G1(a.p_.mul(s.to_uint())); }

 private:
  G1Point p_;
};

class G2 {
 public:
  static constexpr std::size_t kEncodedSize = 96;
  using Encoding = std::array<std::uint8_t, kEncodedSize>;

  G2() = default;
  explicit G2(const G2Point& p) : p_(p) {}
  static G2 identity() { return {}; }
  static const G2& generator();
  static G2 from_bytes(ByteSpan data);

  Encoding to_bytes() const;
  bool is_identity() const { return p_.is_identity(); }
  bool in_subgroup() const;
  const G2Point& point() const { return p_; }

  friend bool operator==(const G2& a, const G2& b) { return a.p_ == b.p_; }
  friend G2 operator+(const G2& a, const G2& b) { return G2(a.p_ + b.p_); }
  friend G2 operator-(const G2& a, const G2& b) { return G2(a.p_ - b.p_); }
  G2 operator-() const { return G2(-p_); }
  friend G2 operator*(const G2& a, const Scalar& s) { return G2(a.p_.mul(s.to_uint())); }

 private:
  G2Point p_;
};

class Gt {
 public:
  static constexpr std::size_t kEncodedSize = 576;
  using Encoding = std::array<std::uint8_t, kEncodedSize>;

  Gt() : v_(Fp12::one()) {}
  explicit Gt(const Fp12& v) : v_(v) {}
  static Gt one() { return {}; }
  // Throws DecodeError unless the value is an r-th root of unity.
  static Gt from_bytes(ByteSpan data);

  Encoding to_bytes() const;
  bool is_one() const { return v_.is_one(); }
  Gt pow(const Scalar& s) const { return Gt(v_.pow(s.to_uint())); }
  Gt inverse() const { return Gt(v_.conjugate()); }
  const Fp12& value() const { return v_; }

  friend bool operator==(const Gt&, const Gt&) = default;
  friend Gt operator*(const Gt& a, const Gt& b) { return Gt(a.v_ * b.v_); }

 private:
  Fp12 v_;
};

// Optimal ate pairing e: G1 x G2 -> Gt.
Gt pair(const G1& a, const G2& b);
// prod_i e(a_i, b_i) with a single final exponentiation.
Gt multi_pair(std::span<const G1> a, std::span<const G2> b);

// Deterministic map into the prime-order subgroup of G1 (random-oracle model).
G1 hash_to_g1(ByteSpan data, DomainTag tag);
// Deterministic, uniform-looking map into Z_r.
Scalar hash_to_scalar(ByteSpan data, DomainTag tag);

// Generators, order and the pairing of generators, computed once.
struct PairingContext {
  G1 g1;
  G2 g2;
  UInt<4> order;
  Gt g1_g2;  // pair(g1, g2); never the identity

  static const PairingContext& instance();
};

}  // namespace pufzk::group
