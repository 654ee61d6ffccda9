#include "pufzk/group/pairing_group.hpp"

#include <stdexcept>

#include "pufzk/crypto/sha256.hpp"

namespace pufzk::group {

namespace {

constexpr std::uint8_t kFlagCompressed = 0x80;
constexpr std::uint8_t kFlagInfinity = 0x40;
constexpr std::uint8_t kFlagSign = 0x20;
constexpr std::uint8_t kFlagMask = 0xe0;

// G1 cofactor clearing by h_eff = 1 - x.
constexpr std::uint64_t kG1EffectiveCofactor = 0xd201000000010001ULL;

Fp fp_from_hex(std::string_view hex) { return Fp::from_canonical(UInt<6>::from_hex(hex)); }

template <std::size_t N>
bool is_identity_encoding(const std::array<std::uint8_t, N>& buf) {
  if (buf[0] != (kFlagCompressed | kFlagInfinity)) return false;
  for (std::size_t i = 1; i < N; ++i) {
    if (buf[i] != 0) return false;
  }
  return true;
}

template <std::size_t N>
std::array<std::uint8_t, N> identity_encoding() {
  std::array<std::uint8_t, N> out{};
  out[0] = kFlagCompressed | kFlagInfinity;
  return out;
}

Fp decode_fp(ByteSpan be) {
  auto v = Fp::from_bytes(be);
  if (!v) throw DecodeError("field element not canonical");
  return *v;
}

}  // namespace

Scalar Scalar::random(crypto::Rng& rng) {
  std::array<std::uint8_t, 64> wide{};
  rng.fill(wide);
  return from_bytes_reduce(wide);
}

Scalar Scalar::from_bytes(ByteSpan be) {
  auto v = Fr::from_bytes(be);
  if (!v) throw DecodeError("scalar not canonical");
  return Scalar(*v);
}

const G1& G1::generator() {
  static const G1 g(G1Point(
      fp_from_hex("17f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac586c55e83ff97a1aeffb3af00adb22c6bb"),
      fp_from_hex("08b3f481e3aaa0f1a09e30ed741d8ae4fcf5e095d5d00af600db18cb2c04b3edd03cc744a2888ae40caa232946c5e7e1"),
      Fp::one()));
  return g;
}

bool G1::in_subgroup() const { return p_.on_curve() && p_.mul(Fr::kModulus).is_identity(); }

G1::Encoding G1::to_bytes() const {
  if (is_identity()) return identity_encoding<kEncodedSize>();
  const auto a = p_.to_affine();
  Encoding out = a.x.to_bytes();
  out[0] |= kFlagCompressed;
  if (a.y.is_lexicographically_largest()) out[0] |= kFlagSign;
  return out;
}

G1 G1::from_bytes(ByteSpan data) {
  if (data.size() != kEncodedSize) throw DecodeError("G1 encoding must be 48 bytes");
  auto buf = to_array<kEncodedSize>(data);
  const std::uint8_t flags = buf[0] & kFlagMask;
  if ((flags & kFlagCompressed) == 0) throw DecodeError("G1 encoding not compressed");
  if (flags & kFlagInfinity) {
    if (!is_identity_encoding(buf)) throw DecodeError("non-canonical G1 identity");
    return identity();
  }
  buf[0] &= static_cast<std::uint8_t>(~kFlagMask);
  const Fp x = decode_fp(buf);
  auto y = (x.square() * x + G1Curve::b()).sqrt();
  if (!y) throw DecodeError("G1 x-coordinate not on curve");
  if (y->is_lexicographically_largest() != ((flags & kFlagSign) != 0)) *y = -*y;
  G1 p(G1Point(x, *y, Fp::one()));
  if (!p.in_subgroup()) throw DecodeError("G1 point not in prime-order subgroup");
  return p;
}

const G2& G2::generator() {
  static const G2 g(G2Point(
      Fp2{fp_from_hex("024aa2b2f08f0a91260805272dc51051c6e47ad4fa403b02b4510b647ae3d1770bac0326a805bbefd48056c8c121bdb8"),
          fp_from_hex("13e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049334cf11213945d57e5ac7d055d042b7e")},
      Fp2{fp_from_hex("0ce5d527727d6e118cc9cdc6da2e351aadfd9baa8cbdd3a76d429a695160d12c923ac9cc3baca289e193548608b82801"),
          fp_from_hex("0606c4a02ea734cc32acd2b02bc28b99cb3e287e85a763af267492ab572e99ab3f370d275cec1da1aaa9075ff05f79be")},
      Fp2::one()));
  return g;
}

bool G2::in_subgroup() const { return p_.on_curve() && p_.mul(Fr::kModulus).is_identity(); }

G2::Encoding G2::to_bytes() const {
  if (is_identity()) return identity_encoding<kEncodedSize>();
  const auto a = p_.to_affine();
  Encoding out{};
  a.x.c1.to_bytes(std::span(out).first<48>());
  a.x.c0.to_bytes(std::span(out).last<48>());
  out[0] |= kFlagCompressed;
  if (a.y.is_lexicographically_largest()) out[0] |= kFlagSign;
  return out;
}

G2 G2::from_bytes(ByteSpan data) {
  if (data.size() != kEncodedSize) throw DecodeError("G2 encoding must be 96 bytes");
  auto buf = to_array<kEncodedSize>(data);
  const std::uint8_t flags = buf[0] & kFlagMask;
  if ((flags & kFlagCompressed) == 0) throw DecodeError("G2 encoding not compressed");
  if (flags & kFlagInfinity) {
    if (!is_identity_encoding(buf)) throw DecodeError("non-canonical G2 identity");
    return identity();
  }
  buf[0] &= static_cast<std::uint8_t>(~kFlagMask);
  const Fp2 x{decode_fp(std::span(buf).last<48>()), decode_fp(std::span(buf).first<48>())};
  auto y = (x.square() * x + G2Curve::b()).sqrt();
  if (!y) throw DecodeError("G2 x-coordinate not on curve");
  if (y->is_lexicographically_largest() != ((flags & kFlagSign) != 0)) *y = -*y;
  G2 p(G2Point(x, *y, Fp2::one()));
  if (!p.in_subgroup()) throw DecodeError("G2 point not in prime-order subgroup");
  return p;
}

namespace {

template <class Fn>
void for_each_coefficient(const Fp12& v, Fn&& fn) {
  for (const Fp6* half : {&v.c0, &v.c1}) {
    for (const Fp2* c : {&half->c0, &half->c1, &half->c2}) {
      fn(c->c0);
      fn(c->c1);
    }
  }
}

}  // namespace

Gt::Encoding Gt::to_bytes() const {
  Encoding out{};
  std::size_t offset = 0;
  for_each_coefficient(v_, [&](const Fp& c) {
    c.to_bytes(std::span(out).subspan(offset, 48));
    offset += 48;
  });
  return out;
}

Gt Gt::from_bytes(ByteSpan data) {
  if (data.size() != kEncodedSize) throw DecodeError("Gt encoding must be 576 bytes");
  std::array<Fp, 12> c;
  for (std::size_t i = 0; i < 12; ++i) c[i] = decode_fp(data.subspan(48 * i, 48));
  const Fp12 v{Fp6{Fp2{c[0], c[1]}, Fp2{c[2], c[3]}, Fp2{c[4], c[5]}},
               Fp6{Fp2{c[6], c[7]}, Fp2{c[8], c[9]}, Fp2{c[10], c[11]}}};
  if (v.is_zero() || !v.pow(Fr::kModulus).is_one()) throw DecodeError("Gt element not in the order-r subgroup");
  return Gt(v);
}

Gt pair(const G1& a, const G2& b) {
  if (a.is_identity() || b.is_identity()) return Gt::one();
  return Gt(final_exponentiation(miller_loop(a.point().to_affine(), b.point().to_affine())));
}

Gt multi_pair(std::span<const G1> a, std::span<const G2> b) {
  if (a.size() != b.size()) throw std::invalid_argument("multi_pair: length mismatch");
  Fp12 f = Fp12::one();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_identity() || b[i].is_identity()) continue;
    f = f * miller_loop(a[i].point().to_affine(), b[i].point().to_affine());
  }
  return Gt(final_exponentiation(f));
}

G1 hash_to_g1(ByteSpan data, DomainTag tag) {
  Bytes msg(data.begin(), data.end());
  msg.push_back(0);
  for (unsigned ctr = 0; ctr < 256; ++ctr) {
    msg.back() = static_cast<std::uint8_t>(ctr);
    const Bytes u = crypto::expand_message_xmd(msg, tag.value, 65);
    const Fp x = Fp::from_bytes_reduce(ByteSpan(u).first(64));
    auto y = (x.square() * x + G1Curve::b()).sqrt();
    if (!y) continue;
    if (y->is_lexicographically_largest() != ((u[64] & 1U) != 0)) *y = -*y;
    const G1Point p = G1Point(x, *y, Fp::one()).mul(UInt<1>::from_u64(kG1EffectiveCofactor));
    if (!p.is_identity()) return G1(p);
  }
  throw std::logic_error("hash_to_g1: no curve point after 256 attempts");
}

Scalar hash_to_scalar(ByteSpan data, DomainTag tag) {
  return Scalar::from_bytes_reduce(crypto::expand_message_xmd(data, tag.value, 48));
}

const PairingContext& PairingContext::instance() {
  static const PairingContext ctx = [] {
    PairingContext c{G1::generator(), G2::generator(), Fr::kModulus, Gt::one()};
    c.g1_g2 = pair(c.g1, c.g2);
    if (c.g1_g2.is_one()) throw std::logic_error("degenerate pairing");
    return c;
  }();
  return ctx;
}

}  // namespace pufzk::group
