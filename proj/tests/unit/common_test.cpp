#include <gtest/gtest.h>

#include <set>

#include "pufzk/common/bytes.hpp"
#include "pufzk/crypto/rng.hpp"
#include "pufzk/crypto/sha256.hpp"

namespace pufzk {
namespace {

TEST(Bytes, HexRoundTrip) {
  const Bytes data{0x00, 0x01, 0xab, 0xff};
  EXPECT_EQ(to_hex(data), "0001abff");
  EXPECT_EQ(from_hex("0001ABff"), data);
  EXPECT_THROW(from_hex("abc"), DecodeError);
  EXPECT_THROW(from_hex("zz"), DecodeError);
}

TEST(Bytes, WriterReaderFields) {
  ByteWriter w;
  w.u8(7).u32(0xdeadbeef).u64(42).field(std::string_view("hello")).raw(Bytes{1, 2});
  ByteReader r(w.bytes());
  EXPECT_EQ(r.u8(), 7);
  EXPECT_EQ(r.u32(), 0xdeadbeefu);
  EXPECT_EQ(r.u64(), 42u);
  EXPECT_EQ(r.string_field(), "hello");
  EXPECT_EQ(r.remaining(), 2u);
  EXPECT_THROW(r.expect_done(), DecodeError);
  r.raw(2);
  r.expect_done();
  EXPECT_THROW(r.u8(), DecodeError);
}

TEST(Bytes, TruncatedFieldRejected) {
  ByteWriter w;
  w.u32(100).raw(Bytes{1, 2, 3});
  ByteReader r(w.bytes());
  EXPECT_THROW(r.field(), DecodeError);
}

TEST(Sha256, KnownAnswer) {
  EXPECT_EQ(to_hex(crypto::sha256(as_bytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(to_hex(crypto::Sha256().update("a").update("bc").finish()), to_hex(crypto::sha256(as_bytes("abc"))));
}

TEST(Sha256, ExpandMessageXmdKnownAnswer) {
  // RFC 9380 appendix K.1, DST "QUUX-V01-CS02-with-expander-SHA256-128".
  const auto out = crypto::expand_message_xmd({}, "QUUX-V01-CS02-with-expander-SHA256-128", 0x20);
  EXPECT_EQ(to_hex(out), "68a985b87eb6b46952128911f2a4412bbc302a9d759667f87f7a21d803f07235");
}

TEST(Rng, SeededStreamsAreReproducible) {
  auto a = crypto::Rng::from_seed(99);
  auto b = crypto::Rng::from_seed(99);
  auto c = crypto::Rng::from_seed(100);
  const Bytes xa = a.bytes(1000);
  EXPECT_EQ(xa, b.bytes(1000));
  EXPECT_NE(xa, c.bytes(1000));
  auto fa = a.fork("x");
  auto fb = b.fork("x");
  EXPECT_EQ(fa.next_u64(), fb.next_u64());
}

TEST(Rng, UniformStaysInRange) {
  auto rng = crypto::Rng::from_seed(1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.uniform(10);
    ASSERT_LT(v, 10u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 10u);
  EXPECT_THROW(rng.uniform(0), std::invalid_argument);
}

}  // namespace
}  // namespace pufzk
