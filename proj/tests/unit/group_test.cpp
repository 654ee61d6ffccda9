#include <gmp.h>
#include <gtest/gtest.h>

#include <random>
#include <set>

#include "pufzk/group/pairing_group.hpp"
#include "support/vectors.hpp"

namespace pufzk::group {
namespace {

// --- GMP helpers (independent big-integer oracle) ---------------------------

struct Mpz {
  mpz_t v;
  Mpz() { mpz_init(v); }
  explicit Mpz(std::string_view hex) {
    mpz_init(v);
    mpz_set_str(v, std::string(hex).c_str(), 16);
  }
  Mpz(const Mpz&) = delete;
  ~Mpz() { mpz_clear(v); }
};

void to_mpz(mpz_t out, ByteSpan be) { mpz_import(out, be.size(), 1, 1, 1, 0, be.data()); }

template <std::size_t K>
UInt<K> to_uint(const mpz_t in) {
  UInt<K> out;
  std::size_t count = 0;
  mpz_export(out.limbs.data(), &count, -1, 8, 0, 0, in);
  if (count > K) throw std::logic_error("exponent too wide");
  return out;
}

const char* kP =
    "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f6241eabfffeb153ffffb9feffffffffaaab";
const char* kR = "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";

Fp random_fp(std::mt19937_64& gen) {
  std::array<std::uint8_t, 64> wide{};
  for (auto& b : wide) b = static_cast<std::uint8_t>(gen());
  return Fp::from_bytes_reduce(wide);
}

Fp2 random_fp2(std::mt19937_64& gen) { return {random_fp(gen), random_fp(gen)}; }

Fp12 random_fp12(std::mt19937_64& gen) {
  return {Fp6{random_fp2(gen), random_fp2(gen), random_fp2(gen)},
          Fp6{random_fp2(gen), random_fp2(gen), random_fp2(gen)}};
}

template <class F>
void expect_matches_gmp(const F& a, const F& b, const char* modulus_hex) {
  Mpz m(modulus_hex), x, y, expect, got;
  to_mpz(x.v, a.to_bytes());
  to_mpz(y.v, b.to_bytes());

  mpz_mul(expect.v, x.v, y.v);
  mpz_mod(expect.v, expect.v, m.v);
  to_mpz(got.v, (a * b).to_bytes());
  EXPECT_EQ(mpz_cmp(expect.v, got.v), 0);

  mpz_add(expect.v, x.v, y.v);
  mpz_mod(expect.v, expect.v, m.v);
  to_mpz(got.v, (a + b).to_bytes());
  EXPECT_EQ(mpz_cmp(expect.v, got.v), 0);

  mpz_sub(expect.v, x.v, y.v);
  mpz_mod(expect.v, expect.v, m.v);
  to_mpz(got.v, (a - b).to_bytes());
  EXPECT_EQ(mpz_cmp(expect.v, got.v), 0);
}

// --- fields ----------------------------------------------------------------

TEST(Field, BaseFieldMatchesIntegerArithmetic) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 1000; ++i) {
    const Fp a = random_fp(gen), b = random_fp(gen), c = random_fp(gen);
    expect_matches_gmp(a, b, kP);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(Field, ScalarArithmeticMatchesIntegerArithmeticModOrder) {
  auto rng = crypto::Rng::from_seed(2);
  for (int i = 0; i < 1000; ++i) {
    const Scalar a = Scalar::random(rng), b = Scalar::random(rng), c = Scalar::random(rng);
    Mpz m(kR), x, y, z, lhs, rhs;
    to_mpz(x.v, a.to_bytes());
    to_mpz(y.v, b.to_bytes());
    to_mpz(z.v, c.to_bytes());
    // a * (b + c) mod r via GMP
    mpz_add(lhs.v, y.v, z.v);
    mpz_mul(lhs.v, lhs.v, x.v);
    mpz_mod(lhs.v, lhs.v, m.v);
    to_mpz(rhs.v, (a * (b + c)).to_bytes());
    EXPECT_EQ(mpz_cmp(lhs.v, rhs.v), 0);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(Field, InverseAndSquareRoot) {
  std::mt19937_64 gen(3);
  int squares = 0;
  for (int i = 0; i < 200; ++i) {
    const Fp a = random_fp(gen);
    EXPECT_EQ(a * a.inverse(), Fp::one());
    EXPECT_EQ(a.square().sqrt()->square(), a.square());
    if (a.sqrt()) ++squares;
    EXPECT_EQ(a.sqrt().has_value(), a.is_square());

    const Fp2 b = random_fp2(gen);
    EXPECT_EQ(b * b.inverse(), Fp2::one());
    const auto root = b.square().sqrt();
    ASSERT_TRUE(root.has_value());
    EXPECT_EQ(root->square(), b.square());
  }
  // Roughly half of random elements are squares.
  EXPECT_GT(squares, 60);
  EXPECT_LT(squares, 140);
}

TEST(Field, Fp12InverseAndFrobenius) {
  std::mt19937_64 gen(4);
  const Fp12 a = random_fp12(gen);
  const Fp12 b = random_fp12(gen);
  EXPECT_EQ(a * a.inverse(), Fp12::one());
  EXPECT_EQ(a.square(), a * a);
  // Frobenius is a ring homomorphism and equals x -> x^p.
  EXPECT_EQ((a * b).frobenius(), a.frobenius() * b.frobenius());
  EXPECT_EQ(a.frobenius(), a.pow(Fp::kModulus));
  Fp12 f = a;
  for (int i = 0; i < 12; ++i) f = f.frobenius();
  EXPECT_EQ(f, a);
}

TEST(Field, RejectsNonCanonicalBytes) {
  const auto p = Fp::kModulus;
  std::array<std::uint8_t, 48> be{};
  for (std::size_t i = 0; i < 48; ++i) be[i] = static_cast<std::uint8_t>(p.limbs[(47 - i) / 8] >> (8 * ((47 - i) % 8)));
  EXPECT_FALSE(Fp::from_bytes(be).has_value());
  be[47] -= 1;
  EXPECT_TRUE(Fp::from_bytes(be).has_value());
}

// --- curve points ----------------------------------------------------------

TEST(Curve, GeneratorsOnCurveAndInSubgroup) {
  EXPECT_TRUE(G1::generator().point().on_curve());
  EXPECT_TRUE(G2::generator().point().on_curve());
  EXPECT_TRUE(G1::generator().in_subgroup());
  EXPECT_TRUE(G2::generator().in_subgroup());
  EXPECT_FALSE(G1::generator().is_identity());
}

TEST(Curve, GroupLaws) {
  auto rng = crypto::Rng::from_seed(5);
  const G1& g = G1::generator();
  for (int i = 0; i < 20; ++i) {
    const Scalar a = Scalar::random(rng), b = Scalar::random(rng);
    EXPECT_EQ(g * a + g * b, g * (a + b));
    EXPECT_EQ((g * a) * b, g * (a * b));
    EXPECT_EQ(g * a - g * a, G1::identity());
    EXPECT_EQ(g * a + G1::identity(), g * a);
    EXPECT_EQ(G2::generator() * a + G2::generator() * b, G2::generator() * (a + b));
  }
  EXPECT_EQ(g + g, g * Scalar::from_u64(2));
  EXPECT_EQ(g * Scalar::zero(), G1::identity());
}

TEST(Curve, MultiplesMatchReferenceEncodings) {
  const auto g1 = testing::load_vectors("group_vectors.txt", "g1_mul");
  const auto g2 = testing::load_vectors("group_vectors.txt", "g2_mul");
  ASSERT_EQ(g1.size(), 10u);
  ASSERT_EQ(g2.size(), 10u);
  for (const auto& v : g1) {
    const Scalar k = Scalar::from_bytes(v.input);
    const auto enc = (G1::generator() * k).to_bytes();
    EXPECT_EQ(to_hex(enc), to_hex(v.output));
    EXPECT_EQ(G1::from_bytes(v.output), G1::generator() * k);
  }
  for (const auto& v : g2) {
    const Scalar k = Scalar::from_bytes(v.input);
    EXPECT_EQ(to_hex((G2::generator() * k).to_bytes()), to_hex(v.output));
    EXPECT_EQ(G2::from_bytes(v.output), G2::generator() * k);
  }
}

// --- pairing ---------------------------------------------------------------

TEST(Pairing, FinalExponentiationMatchesPlainExponent) {
  Mpz p(kP), r(kR), e;
  mpz_pow_ui(e.v, p.v, 12);
  mpz_sub_ui(e.v, e.v, 1);
  ASSERT_TRUE(mpz_divisible_p(e.v, r.v));
  mpz_divexact(e.v, e.v, r.v);
  const auto exponent = to_uint<72>(e.v);

  std::mt19937_64 gen(6);
  for (int i = 0; i < 2; ++i) {
    const Fp12 f = random_fp12(gen);
    EXPECT_EQ(final_exponentiation(f), f.pow(exponent));
  }
}

TEST(Pairing, MatchesReferenceValues) {
  const auto vectors = testing::load_vectors("group_vectors.txt", "pair");
  ASSERT_EQ(vectors.size(), 3u);
  for (const auto& v : vectors) {
    const Scalar a = Scalar::from_bytes(ByteSpan(v.input).first(32));
    const Scalar b = Scalar::from_bytes(ByteSpan(v.input).last(32));
    const Gt value = pair(G1::generator() * a, G2::generator() * b);
    EXPECT_EQ(to_hex(value.to_bytes()), to_hex(v.output));
  }
}

TEST(Pairing, SmallExponents) {
  const auto& ctx = PairingContext::instance();
  EXPECT_EQ(pair(ctx.g1 * Scalar::from_u64(2), ctx.g2 * Scalar::from_u64(3)), ctx.g1_g2.pow(Scalar::from_u64(6)));
  EXPECT_TRUE(pair(G1::identity(), ctx.g2).is_one());
  EXPECT_TRUE(pair(ctx.g1, G2::identity()).is_one());
}

TEST(Pairing, NonDegenerate) {
  const auto& ctx = PairingContext::instance();
  EXPECT_FALSE(ctx.g1_g2.is_one());
  // e(g1, g2) has order exactly r.
  EXPECT_TRUE(ctx.g1_g2.pow(Scalar::zero()).is_one());
  EXPECT_TRUE(Gt(ctx.g1_g2.value().pow(ctx.order)).is_one());
}

TEST(Pairing, ExponentMovesAcrossArguments) {
  const auto& ctx = PairingContext::instance();
  auto rng = crypto::Rng::from_seed(7);
  for (int i = 0; i < 100; ++i) {
    const Scalar x = Scalar::random(rng);
    EXPECT_EQ(pair(ctx.g1 * x, ctx.g2), pair(ctx.g1, ctx.g2 * x));
  }
}

TEST(Pairing, Bilinearity) {
  const auto& ctx = PairingContext::instance();
  auto rng = crypto::Rng::from_seed(8);
  for (int i = 0; i < 100; ++i) {
    const Scalar x = Scalar::random(rng), y = Scalar::random(rng);
    EXPECT_EQ(pair(ctx.g1 * x, ctx.g2 * y), ctx.g1_g2.pow(x * y));
  }
}

TEST(Pairing, MultiPairIsProductOfPairings) {
  const auto& ctx = PairingContext::instance();
  auto rng = crypto::Rng::from_seed(18);
  for (int i = 0; i < 10; ++i) {
    std::vector<G1> a;
    std::vector<G2> b;
    Gt expected = Gt::one();
    for (int k = 0; k <= i % 4; ++k) {
      a.push_back(ctx.g1 * Scalar::random(rng));
      b.push_back(ctx.g2 * Scalar::random(rng));
      expected = expected * pair(a.back(), b.back());
    }
    EXPECT_EQ(multi_pair(a, b), expected);
  }
  const std::array<G1, 2> a{ctx.g1, G1()};
  const std::array<G2, 2> b{ctx.g2, ctx.g2};
  EXPECT_EQ(multi_pair(a, b), ctx.g1_g2);
  EXPECT_EQ(multi_pair({}, {}), Gt::one());
  const std::array<G1, 2> c{ctx.g1 * Scalar::from_u64(5), -(ctx.g1 * Scalar::from_u64(5))};
  EXPECT_EQ(multi_pair(c, b), Gt::one());
}

TEST(Pairing, GtEncodingRoundTrip) {
  const auto& ctx = PairingContext::instance();
  const Gt v = ctx.g1_g2.pow(Scalar::from_u64(12345));
  EXPECT_EQ(Gt::from_bytes(v.to_bytes()), v);
  EXPECT_EQ(v * v.inverse(), Gt::one());
  auto bad = v.to_bytes();
  bad[575] ^= 1;
  EXPECT_THROW(Gt::from_bytes(bad), DecodeError);
  EXPECT_THROW(Gt::from_bytes(ByteSpan(bad).first(100)), DecodeError);
}

// --- hashing ---------------------------------------------------------------

TEST(Hash, HashToG1IsDeterministicAndInSubgroup) {
  for (int i = 0; i < 10; ++i) {
    const std::string msg = "message-" + std::to_string(i);
    const G1 a = hash_to_g1(as_bytes(msg), tags::kSignature);
    const G1 b = hash_to_g1(as_bytes(msg), tags::kSignature);
    EXPECT_EQ(a, b);
    EXPECT_FALSE(a.is_identity());
    EXPECT_TRUE(a.point().mul(Fr::kModulus).is_identity());
  }
  EXPECT_FALSE(hash_to_g1({}, tags::kSignature).is_identity());
}

TEST(Hash, DistinctTagsGiveDistinctPoints) {
  auto rng = crypto::Rng::from_seed(9);
  for (int i = 0; i < 1000; ++i) {
    const Bytes x = rng.bytes(1 + rng.uniform(64));
    EXPECT_NE(hash_to_g1(x, tags::kLiteralAuthBase), hash_to_g1(x, tags::kLiteralTxBase));
  }
}

TEST(Hash, HashToScalarMatchesReference) {
  const auto vectors = testing::load_vectors("group_vectors.txt", "hash_to_scalar");
  ASSERT_EQ(vectors.size(), 6u);
  for (const auto& v : vectors) {
    const std::size_t dst_len = v.input[0];
    const std::string dst(v.input.begin() + 1, v.input.begin() + 1 + static_cast<long>(dst_len));
    const ByteSpan msg = ByteSpan(v.input).subspan(1 + dst_len);
    EXPECT_EQ(to_hex(hash_to_scalar(msg, DomainTag{dst}).to_bytes()), to_hex(v.output));
  }
}

TEST(Hash, HashToScalarPinnedEmptyInput) {
  // Frozen test vector; also covered by the reference file above.
  EXPECT_EQ(hash_to_scalar({}, tags::kResponseScalar), hash_to_scalar({}, tags::kResponseScalar));
  EXPECT_NE(hash_to_scalar({}, tags::kResponseScalar), hash_to_scalar({}, tags::kAuthChallenge));
}

TEST(Hash, HashToScalarHasNoCollisionsOnRandomInputs) {
  auto rng = crypto::Rng::from_seed(10);
  std::set<std::string> seen;
  for (int i = 0; i < 10000; ++i) {
    const Bytes x = rng.bytes(32);
    seen.insert(to_hex(hash_to_scalar(x, tags::kAuthChallenge).to_bytes()));
  }
  EXPECT_EQ(seen.size(), 10000u);
}

// --- serialization ---------------------------------------------------------

TEST(Serialization, RoundTripAndCanonicity) {
  auto rng = crypto::Rng::from_seed(11);
  for (int i = 0; i < 20; ++i) {
    const Scalar a = Scalar::random(rng), b = Scalar::random(rng);
    const G1 p1 = G1::generator() * (a + b);
    const G1 p2 = G1::generator() * a + G1::generator() * b;  // different Jacobian representative
    EXPECT_EQ(p1.to_bytes(), p2.to_bytes());
    EXPECT_EQ(G1::from_bytes(p1.to_bytes()).to_bytes(), p1.to_bytes());
    const G2 q = G2::generator() * a;
    EXPECT_EQ(G2::from_bytes(q.to_bytes()).to_bytes(), q.to_bytes());
    EXPECT_EQ(Scalar::from_bytes(a.to_bytes()), a);
  }
  EXPECT_EQ(G1::from_bytes(G1::identity().to_bytes()), G1::identity());
  EXPECT_EQ(G2::from_bytes(G2::identity().to_bytes()), G2::identity());
  EXPECT_EQ(G1::identity().to_bytes()[0], 0xc0);
}

TEST(Serialization, TruncatedOrMalformedInputRejected) {
  const auto g1 = G1::generator().to_bytes();
  const auto g2 = G2::generator().to_bytes();
  EXPECT_THROW(G1::from_bytes(ByteSpan(g1).first(47)), DecodeError);
  EXPECT_THROW(G2::from_bytes(ByteSpan(g2).first(95)), DecodeError);
  EXPECT_THROW(Scalar::from_bytes(ByteSpan(Scalar::one().to_bytes()).first(31)), DecodeError);

  auto uncompressed = g1;
  uncompressed[0] &= 0x7f;
  EXPECT_THROW(G1::from_bytes(uncompressed), DecodeError);

  auto dirty_identity = G1::identity().to_bytes();
  dirty_identity[10] = 1;
  EXPECT_THROW(G1::from_bytes(dirty_identity), DecodeError);

  std::array<std::uint8_t, 32> big{};
  big.fill(0xff);
  EXPECT_THROW(Scalar::from_bytes(big), DecodeError);
}

template <class Group>
void fuzz_mutations(const typename Group::Encoding& valid, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  int rejected = 0;
  for (int i = 0; i < 1000; ++i) {
    auto buf = valid;
    const std::size_t pos = gen() % buf.size();
    buf[pos] ^= static_cast<std::uint8_t>(1U << (gen() % 8));
    try {
      const Group p = Group::from_bytes(buf);
      // Accepted only as a different, canonical subgroup element.
      EXPECT_TRUE(p.in_subgroup());
      EXPECT_EQ(p.to_bytes(), buf);
    } catch (const DecodeError&) {
      ++rejected;
    }
  }
  EXPECT_GT(rejected, 0);
}

TEST(Serialization, MutatedEncodingsNeverYieldOffSubgroupPoints) {
  auto rng = crypto::Rng::from_seed(12);
  fuzz_mutations<G1>((G1::generator() * Scalar::random(rng)).to_bytes(), 13);
}

TEST(Serialization, MutatedG2EncodingsNeverYieldOffSubgroupPoints) {
  auto rng = crypto::Rng::from_seed(14);
  fuzz_mutations<G2>((G2::generator() * Scalar::random(rng)).to_bytes(), 15);
}

}  // namespace
}  // namespace pufzk::group
