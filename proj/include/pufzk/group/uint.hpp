#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pufzk::group {

using u128 = unsigned __int128;

// Fixed-width unsigned integer, little-endian 64-bit limbs. Everything is
// constexpr so field parameters can be derived at compile time.
template <std::size_t N>
struct UInt {
  std::array<std::uint64_t, N> limbs{};

  static constexpr UInt from_u64(std::uint64_t v) {
    UInt out;
    out.limbs[0] = v;
    return out;
  }

  // Big-endian hex, optional 0x prefix; excess high digits must be zero.
  static constexpr UInt from_hex(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
    UInt out;
    std::size_t bit = 0;
    for (std::size_t i = hex.size(); i-- > 0;) {
      const char c = hex[i];
      std::uint64_t d = 0;
      if (c >= '0' && c <= '9') {
        d = static_cast<std::uint64_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        d = static_cast<std::uint64_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        d = static_cast<std::uint64_t>(c - 'A' + 10);
      } else {
        throw "invalid hex digit";
      }
      if (bit / 64 < N) {
        out.limbs[bit / 64] |= d << (bit % 64);
      } else if (d != 0) {
        throw "hex literal too wide";
      }
      bit += 4;
    }
    return out;
  }

  constexpr bool bit(std::size_t i) const { return i < 64 * N && ((limbs[i / 64] >> (i % 64)) & 1U); }

  constexpr std::size_t bit_length() const {
    for (std::size_t i = N; i-- > 0;) {
      if (limbs[i] != 0) return 64 * i + 64 - static_cast<std::size_t>(__builtin_clzll(limbs[i]));
    }
    return 0;
  }

  constexpr bool is_zero() const {
    for (auto l : limbs) {
      if (l != 0) return false;
    }
    return true;
  }

  friend constexpr bool operator==(const UInt&, const UInt&) = default;

  friend constexpr std::strong_ordering operator<=>(const UInt& a, const UInt& b) {
    for (std::size_t i = N; i-- > 0;) {
      if (a.limbs[i] != b.limbs[i]) return a.limbs[i] <=> b.limbs[i];
    }
    return std::strong_ordering::equal;
  }
};

// a += b, returns carry out.
template <std::size_t N>
constexpr std::uint64_t add_in_place(UInt<N>& a, const UInt<N>& b) {
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const u128 s = static_cast<u128>(a.limbs[i]) + b.limbs[i] + carry;
    a.limbs[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<std::uint64_t>(s >> 64);
  }
  return carry;
}

// a -= b, returns borrow out.
template <std::size_t N>
constexpr std::uint64_t sub_in_place(UInt<N>& a, const UInt<N>& b) {
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const u128 d = static_cast<u128>(a.limbs[i]) - b.limbs[i] - borrow;
    a.limbs[i] = static_cast<std::uint64_t>(d);
    borrow = static_cast<std::uint64_t>(d >> 64) & 1U;
  }
  return borrow;
}

template <std::size_t N>
constexpr UInt<N> add_small(UInt<N> a, std::uint64_t v) {
  add_in_place(a, UInt<N>::from_u64(v));
  return a;
}

template <std::size_t N>
constexpr UInt<N> sub_small(UInt<N> a, std::uint64_t v) {
  sub_in_place(a, UInt<N>::from_u64(v));
  return a;
}

template <std::size_t N>
constexpr UInt<N> shift_right(UInt<N> a, unsigned s) {
  while (s >= 64) {
    for (std::size_t i = 0; i + 1 < N; ++i) a.limbs[i] = a.limbs[i + 1];
    a.limbs[N - 1] = 0;
    s -= 64;
  }
  if (s == 0) return a;
  for (std::size_t i = 0; i < N; ++i) {
    a.limbs[i] >>= s;
    if (i + 1 < N) a.limbs[i] |= a.limbs[i + 1] << (64 - s);
  }
  return a;
}

template <std::size_t N>
constexpr UInt<N> div_small(const UInt<N>& a, std::uint64_t d) {
  UInt<N> q;
  u128 rem = 0;
  for (std::size_t i = N; i-- > 0;) {
    const u128 cur = (rem << 64) | a.limbs[i];
    q.limbs[i] = static_cast<std::uint64_t>(cur / d);
    rem = cur % d;
  }
  return q;
}

}  // namespace pufzk::group
