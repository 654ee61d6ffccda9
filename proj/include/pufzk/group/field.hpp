#pragma once

#include <algorithm>
#include <optional>

#include "pufzk/common/bytes.hpp"
#include "pufzk/group/uint.hpp"

namespace pufzk::group {

// Prime field in Montgomery representation (R = 2^(64N)).
// Params supplies kLimbs, kBytes and kModulus; the modulus must leave the
// top bit of the top limb clear.
template <class Params>
class MontgomeryField {
 public:
  static constexpr std::size_t kLimbs = Params::kLimbs;
  static constexpr std::size_t kBytes = Params::kBytes;
  using Repr = UInt<kLimbs>;
  static constexpr Repr kModulus = Params::kModulus;

 private:
  static constexpr std::uint64_t compute_inv() {
    // Newton iteration for m^-1 mod 2^64, then negate.
    std::uint64_t inv = 1;
    for (int i = 0; i < 7; ++i) inv *= 2 - kModulus.limbs[0] * inv;
    return ~inv + 1;
  }

  static constexpr Repr mod_double(Repr a) {
    const std::uint64_t carry = add_in_place(a, a);
    if (carry != 0 || a >= kModulus) sub_in_place(a, kModulus);
    return a;
  }

  static constexpr Repr compute_r(std::size_t doublings) {
    Repr x = Repr::from_u64(1);
    for (std::size_t i = 0; i < doublings; ++i) x = mod_double(x);
    return x;
  }

  static constexpr std::uint64_t kInv = compute_inv();
  static constexpr Repr kOne = compute_r(64 * kLimbs);
  static constexpr Repr kR2 = compute_r(128 * kLimbs);

  static_assert((kModulus.limbs[kLimbs - 1] >> 63) == 0, "modulus must leave a spare top bit");

  static constexpr Repr mont_mul(const Repr& a, const Repr& b) {
    std::array<std::uint64_t, kLimbs + 2> t{};
    for (std::size_t i = 0; i < kLimbs; ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < kLimbs; ++j) {
        const u128 s = static_cast<u128>(a.limbs[j]) * b.limbs[i] + t[j] + carry;
        t[j] = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
      }
      u128 s = static_cast<u128>(t[kLimbs]) + carry;
      t[kLimbs] = static_cast<std::uint64_t>(s);
      t[kLimbs + 1] = static_cast<std::uint64_t>(s >> 64);

      const std::uint64_t m = t[0] * kInv;
      s = static_cast<u128>(m) * kModulus.limbs[0] + t[0];
      carry = static_cast<std::uint64_t>(s >> 64);
      for (std::size_t j = 1; j < kLimbs; ++j) {
        s = static_cast<u128>(m) * kModulus.limbs[j] + t[j] + carry;
        t[j - 1] = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
      }
      s = static_cast<u128>(t[kLimbs]) + carry;
      t[kLimbs - 1] = static_cast<std::uint64_t>(s);
      t[kLimbs] = t[kLimbs + 1] + static_cast<std::uint64_t>(s >> 64);
    }
    Repr out;
    std::copy_n(t.begin(), kLimbs, out.limbs.begin());
    if (t[kLimbs] != 0 || out >= kModulus) sub_in_place(out, kModulus);
    return out;
  }

 public:
  constexpr MontgomeryField() = default;

  static constexpr MontgomeryField zero() { return {}; }
  static constexpr MontgomeryField one() { return from_mont(kOne); }

  // value must already be < modulus.
  static constexpr MontgomeryField from_canonical(const Repr& value) { return from_mont(mont_mul(value, kR2)); }
  static constexpr MontgomeryField from_u64(std::uint64_t v) { return from_canonical(Repr::from_u64(v)); }

  // Strict big-endian decoding; rejects values >= modulus.
  static std::optional<MontgomeryField> from_bytes(ByteSpan be) {
    if (be.size() != kBytes) return std::nullopt;
    Repr v;
    for (std::size_t i = 0; i < kBytes; ++i) {
      const std::size_t byte_index = kBytes - 1 - i;  // little-endian position
      v.limbs[byte_index / 8] |= static_cast<std::uint64_t>(be[i]) << (8 * (byte_index % 8));
    }
    if (v >= kModulus) return std::nullopt;
    return from_canonical(v);
  }

  // Interprets arbitrary-length big-endian bytes and reduces mod the modulus.
  static MontgomeryField from_bytes_reduce(ByteSpan be) {
    const MontgomeryField base = from_u64(256);
    MontgomeryField acc;
    for (auto b : be) acc = acc * base + from_u64(b);
    return acc;
  }

  constexpr Repr to_canonical() const { return mont_mul(v_, Repr::from_u64(1)); }

  void to_bytes(std::span<std::uint8_t> out) const {
    const Repr c = to_canonical();
    for (std::size_t i = 0; i < kBytes; ++i) {
      const std::size_t byte_index = kBytes - 1 - i;
      out[i] = static_cast<std::uint8_t>(c.limbs[byte_index / 8] >> (8 * (byte_index % 8)));
    }
  }

  std::array<std::uint8_t, kBytes> to_bytes() const {
    std::array<std::uint8_t, kBytes> out{};
    to_bytes(out);
    return out;
  }

  constexpr bool is_zero() const { return v_.is_zero(); }
  constexpr bool is_one() const { return v_ == kOne; }

  friend constexpr bool operator==(const MontgomeryField&, const MontgomeryField&) = default;

  friend constexpr MontgomeryField operator+(MontgomeryField a, const MontgomeryField& b) {
    const std::uint64_t carry = add_in_place(a.v_, b.v_);
    if (carry != 0 || a.v_ >= kModulus) sub_in_place(a.v_, kModulus);
    return a;
  }

  friend constexpr MontgomeryField operator-(MontgomeryField a, const MontgomeryField& b) {
    if (sub_in_place(a.v_, b.v_) != 0) add_in_place(a.v_, kModulus);
    return a;
  }

  constexpr MontgomeryField operator-() const { return zero() - *this; }

  friend constexpr MontgomeryField operator*(const MontgomeryField& a, const MontgomeryField& b) {
    return from_mont(mont_mul(a.v_, b.v_));
  }

  MontgomeryField& operator+=(const MontgomeryField& o) { return *this = *this + o; }
  MontgomeryField& operator-=(const MontgomeryField& o) { return *this = *this - o; }
  MontgomeryField& operator*=(const MontgomeryField& o) { return *this = *this * o; }

  constexpr MontgomeryField square() const { return *this * *this; }
  constexpr MontgomeryField dbl() const { return *this + *this; }

  template <std::size_t K>
  constexpr MontgomeryField pow(const UInt<K>& e) const {
    MontgomeryField acc = one();
    for (std::size_t i = e.bit_length(); i-- > 0;) {
      acc = acc.square();
      if (e.bit(i)) acc *= *this;
    }
    return acc;
  }

  // Fermat inverse; zero maps to zero.
  MontgomeryField inverse() const { return pow(sub_small(kModulus, 2)); }

  // Legendre symbol: 1 for non-zero squares, -1 (as modulus-1) otherwise.
  bool is_square() const {
    if (is_zero()) return true;
    return pow(shift_right(sub_small(kModulus, 1), 1)).is_one();
  }

  // Only valid for moduli congruent to 3 mod 4.
  std::optional<MontgomeryField> sqrt() const {
    static_assert((kModulus.limbs[0] & 3U) == 3U, "sqrt requires modulus = 3 mod 4");
    const MontgomeryField root = pow(shift_right(add_small(kModulus, 1), 2));
    if (root.square() != *this) return std::nullopt;
    return root;
  }

  // True if the canonical value exceeds (modulus - 1) / 2.
  bool is_lexicographically_largest() const {
    return to_canonical() > shift_right(sub_small(kModulus, 1), 1);
  }

 private:
  static constexpr MontgomeryField from_mont(const Repr& v) {
    MontgomeryField f;
    f.v_ = v;
    return f;
  }

  Repr v_{};
};

}  // namespace pufzk::group
