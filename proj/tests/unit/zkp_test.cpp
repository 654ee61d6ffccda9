#include <gtest/gtest.h>

#include <random>
#include <set>

#include "pufzk/zkp/proofs.hpp"
#include "support/vectors.hpp"

namespace pufzk::zkp {
namespace {

struct Fixture {
  crypto::Rng rng = crypto::Rng::from_seed(77);
  Scalar sk = Scalar::random(rng);
  Scalar rho = Scalar::random(rng);
  AuthStatement st;

  Fixture() {
    st.device_id = crypto::sha256(as_bytes("device"));
    st.pk = G2::generator() * sk;
    st.W = G1::generator() * rho;
    st.round = 2;
    rng.fill(st.nonce);
  }
};

Nonce fresh_nonce(crypto::Rng& rng) {
  Nonce n{};
  rng.fill(n);
  return n;
}

// ---- reference vectors ----

TEST(ProofVectors, LiteralProofsMatchReference) {
  for (const auto& v : testing::load_vectors("proof_vectors.txt", "literal_auth")) {
    ByteReader r(v.input);
    auto rng = crypto::Rng::from_seed(r.u64());
    const Scalar sk = Scalar::from_bytes(r.raw(32));
    const ByteSpan R = r.raw(r.remaining());
    const auto setup = TrustSetup::with_alpha(Scalar::one());
    EXPECT_EQ(to_hex(auth_prove_literal(setup, R, sk, rng).to_bytes()), to_hex(v.output));
  }
  for (const auto& v : testing::load_vectors("proof_vectors.txt", "literal_tx")) {
    ByteReader r(v.input);
    auto rng = crypto::Rng::from_seed(r.u64());
    const auto setup = TrustSetup::with_alpha(Scalar::one());
    EXPECT_EQ(to_hex(tx_prove_literal(setup, r.raw(r.remaining()), rng).to_bytes()), to_hex(v.output));
  }
}

TEST(ProofVectors, CorrectedProofsMatchReference) {
  const auto auth = testing::load_vectors("proof_vectors.txt", "corrected_auth");
  ASSERT_EQ(auth.size(), 3u);
  for (const auto& v : auth) {
    ByteReader r(v.input);
    auto rng = crypto::Rng::from_seed(r.u64());
    AuthWitness w{Scalar::from_bytes(r.raw(32)), Scalar::from_bytes(r.raw(32))};
    AuthStatement st;
    st.device_id = r.fixed<32>();
    st.round = r.u32();
    st.nonce = r.fixed<16>();
    st.pk = G2::generator() * w.sk;
    st.W = G1::generator() * w.rho;
    const auto proof = auth_prove_corrected(st, w, rng);
    EXPECT_EQ(to_hex(proof.to_bytes()), to_hex(v.output));
    EXPECT_TRUE(auth_verify_corrected(st, CorrectedAuthProof::from_bytes(v.output)));
  }
  const auto tx = testing::load_vectors("proof_vectors.txt", "corrected_tx");
  ASSERT_EQ(tx.size(), 3u);
  for (const auto& v : tx) {
    ByteReader r(v.input);
    auto rng = crypto::Rng::from_seed(r.u64());
    const Scalar sk = Scalar::from_bytes(r.raw(32));
    TxStatement st;
    st.device_id = r.fixed<32>();
    st.payload_digest = r.fixed<32>();
    st.nonce = r.fixed<16>();
    st.pk = G2::generator() * sk;
    EXPECT_EQ(to_hex(tx_prove_corrected(st, sk, rng).to_bytes()), to_hex(v.output));
  }
}

TEST(ProofVectors, SignaturesMatchReference) {
  const auto vectors = testing::load_vectors("proof_vectors.txt", "signature");
  ASSERT_EQ(vectors.size(), 4u);
  for (const auto& v : vectors) {
    const Scalar sk = Scalar::from_bytes(ByteSpan(v.input).first(32));
    const ByteSpan msg = ByteSpan(v.input).subspan(32);
    EXPECT_EQ(to_hex(sign(sk, msg).to_bytes()), to_hex(v.output));
    EXPECT_TRUE(verify_sig_bytes(G2::generator() * sk, msg, v.output));
  }
}

// ---- trust setup ----

TEST(TrustSetup, AlphaOneGivesGenerator) { EXPECT_EQ(TrustSetup::with_alpha(Scalar::one()).pk, G2::generator()); }

TEST(TrustSetup, RandomRunsAreDistinct) {
  auto rng = crypto::Rng::from_seed(1);
  std::set<std::string> seen;
  for (int i = 0; i < 100; ++i) {
    const auto s = TrustSetup::generate(rng);
    EXPECT_GE(s.duration_ms, 0.0);
    seen.insert(to_hex(s.alpha.to_bytes()));
  }
  EXPECT_EQ(seen.size(), 100u);
  const auto s = TrustSetup::generate(rng);
  EXPECT_EQ(group::pair(G1::generator(), s.pk), group::PairingContext::instance().g1_g2.pow(s.alpha));
}

// ---- literal mode ----

TEST(LiteralMode, DeterministicUnderFixedRandomness) {
  const auto setup = TrustSetup::with_alpha(Scalar::one());
  const Bytes R = {1, 2, 3, 4};
  auto a = crypto::Rng::from_seed(5);
  auto b = crypto::Rng::from_seed(5);
  EXPECT_EQ(auth_prove_literal(setup, R, Scalar::from_u64(9), a).to_bytes(),
            auth_prove_literal(setup, R, Scalar::from_u64(9), b).to_bytes());
}

TEST(LiteralMode, ConstantSizeAndPublicRelation) {
  auto rng = crypto::Rng::from_seed(6);
  const auto setup = TrustSetup::generate(rng);
  for (int i = 0; i < 50; ++i) {
    const Bytes R = rng.bytes(32);
    const auto p = auth_prove_literal(setup, R, Scalar::random(rng), rng);
    EXPECT_EQ(p.to_bytes().size(), SigmaProof::kEncodedSize);
    EXPECT_EQ(p.V, p.S + p.U * literal_challenge(p.S, p.U));
  }
  EXPECT_EQ(SigmaProof::kEncodedSize, 145u);
}

TEST(LiteralMode, HonestProofsAcceptedExactlyWhenAlphaIsOne) {
  auto rng = crypto::Rng::from_seed(7);
  const auto one = TrustSetup::with_alpha(Scalar::one());
  const auto random = TrustSetup::generate(rng);
  ASSERT_NE(random.alpha, Scalar::one());
  for (int i = 0; i < 10; ++i) {
    const Bytes R = rng.bytes(32);
    const Scalar sk = Scalar::random(rng);
    EXPECT_TRUE(auth_verify_literal(one, auth_prove_literal(one, R, sk, rng)));
    EXPECT_FALSE(auth_verify_literal(random, auth_prove_literal(random, R, sk, rng)));
  }
}

TEST(LiteralMode, PublicForgeryAcceptedWheneverHonestProofsAre) {
  auto rng = crypto::Rng::from_seed(8);
  const auto one = TrustSetup::with_alpha(Scalar::one());
  const auto random = TrustSetup::generate(rng);
  for (int i = 0; i < 10; ++i) {
    SigmaProof forged;
    forged.S = G1::generator() * Scalar::random(rng);
    forged.U = G1::generator() * Scalar::random(rng);
    forged.V = forged.S + forged.U * literal_challenge(forged.S, forged.U);
    EXPECT_TRUE(auth_verify_literal(one, forged));
    EXPECT_FALSE(auth_verify_literal(random, forged));
  }
}

TEST(LiteralMode, TransactionProofs) {
  auto rng = crypto::Rng::from_seed(9);
  const auto one = TrustSetup::with_alpha(Scalar::one());
  const auto random = TrustSetup::generate(rng);
  const Bytes T = {'t', 'x'}, T2 = {'t', 'y'};
  EXPECT_TRUE(tx_verify_literal(one, tx_prove_literal(one, T, rng)));
  EXPECT_FALSE(tx_verify_literal(random, tx_prove_literal(random, T, rng)));
  auto a = crypto::Rng::from_seed(10);
  auto b = crypto::Rng::from_seed(10);
  EXPECT_NE(tx_prove_literal(one, T, a).to_bytes(), tx_prove_literal(one, T2, b).to_bytes());
}

TEST(LiteralMode, MalformedBytesRejected) {
  auto rng = crypto::Rng::from_seed(11);
  const auto one = TrustSetup::with_alpha(Scalar::one());
  const Bytes good = tx_prove_literal(one, Bytes{1}, rng).to_bytes();
  EXPECT_TRUE(verify_literal_bytes(one.pk, good));
  Bytes wrong_tag = good;
  wrong_tag[0] = 0x02;
  EXPECT_FALSE(verify_literal_bytes(one.pk, wrong_tag));
  EXPECT_FALSE(verify_literal_bytes(one.pk, ByteSpan(good).first(100)));
  Bytes garbage(SigmaProof::kEncodedSize, 0xff);
  garbage[0] = 0x01;
  EXPECT_FALSE(verify_literal_bytes(one.pk, garbage));
}

// ---- corrected auth ----

TEST(CorrectedAuth, Completeness) {
  Fixture f;
  for (int i = 0; i < 50; ++i) {
    f.st.nonce = fresh_nonce(f.rng);
    const auto p = auth_prove_corrected(f.st, {f.sk, f.rho}, f.rng);
    EXPECT_TRUE(auth_verify_corrected(f.st, p));
    EXPECT_EQ(p.to_bytes().size(), CorrectedAuthProof::kEncodedSize);
    EXPECT_TRUE(auth_verify_corrected(f.st, CorrectedAuthProof::from_bytes(p.to_bytes())));
  }
  EXPECT_EQ(CorrectedAuthProof::kEncodedSize, 257u);
}

TEST(CorrectedAuth, NonceBinding) {
  Fixture f;
  const auto p1 = auth_prove_corrected(f.st, {f.sk, f.rho}, f.rng);
  AuthStatement st2 = f.st;
  st2.nonce = fresh_nonce(f.rng);
  auto same = crypto::Rng::from_seed(1);
  auto same2 = crypto::Rng::from_seed(1);
  const auto a = auth_prove_corrected(f.st, {f.sk, f.rho}, same);
  const auto b = auth_prove_corrected(st2, {f.sk, f.rho}, same2);
  EXPECT_NE(a.challenge, b.challenge);
  EXPECT_NE(a.resp_sk, b.resp_sk);
  EXPECT_NE(a.resp_puf, b.resp_puf);
  // Replay of p1 under a fresh nonce: both with the stale nonce kept and with
  // the nonce field rewritten.
  EXPECT_FALSE(auth_verify_corrected(st2, p1));
  auto rewritten = p1;
  rewritten.nonce = st2.nonce;
  EXPECT_FALSE(auth_verify_corrected(st2, rewritten));
}

TEST(CorrectedAuth, StatementBinding) {
  Fixture f;
  const auto p = auth_prove_corrected(f.st, {f.sk, f.rho}, f.rng);
  auto st = f.st;
  st.round = 3;
  EXPECT_FALSE(auth_verify_corrected(st, p));
  st = f.st;
  st.device_id[0] ^= 1;
  EXPECT_FALSE(auth_verify_corrected(st, p));
  st = f.st;
  st.W = st.W + G1::generator();
  EXPECT_FALSE(auth_verify_corrected(st, p));
  st = f.st;
  st.pk = st.pk + G2::generator();
  EXPECT_FALSE(auth_verify_corrected(st, p));
}

TEST(CorrectedAuth, EachFieldPerturbationRejected) {
  Fixture f;
  const auto p = auth_prove_corrected(f.st, {f.sk, f.rho}, f.rng);
  ASSERT_TRUE(auth_verify_corrected(f.st, p));
  const Scalar one = Scalar::one();
  auto q = p;
  q.resp_sk = q.resp_sk + one;
  EXPECT_FALSE(auth_verify_corrected(f.st, q));
  q = p;
  q.resp_puf = q.resp_puf + one;
  EXPECT_FALSE(auth_verify_corrected(f.st, q));
  q = p;
  q.challenge = q.challenge + one;
  EXPECT_FALSE(auth_verify_corrected(f.st, q));
  q = p;
  q.commit_sk = q.commit_sk + G2::generator();
  EXPECT_FALSE(auth_verify_corrected(f.st, q));
  q = p;
  q.commit_puf = q.commit_puf + G1::generator();
  EXPECT_FALSE(auth_verify_corrected(f.st, q));
  q = p;
  q.nonce[5] ^= 0x10;
  EXPECT_FALSE(auth_verify_corrected(f.st, q));
}

TEST(CorrectedAuth, InconsistentWitnessDoesNotVerify) {
  Fixture f;
  EXPECT_FALSE(auth_verify_corrected(f.st, auth_prove_corrected(f.st, {f.sk, f.rho + Scalar::one()}, f.rng)));
  EXPECT_FALSE(auth_verify_corrected(f.st, auth_prove_corrected(f.st, {f.sk + Scalar::one(), f.rho}, f.rng)));
}

TEST(CorrectedAuth, SimulatorProducesValidSigmaTranscripts) {
  Fixture f;
  for (int i = 0; i < 20; ++i) {
    const auto sim = simulate_auth_transcript(f.st, f.rng);
    EXPECT_TRUE(verify_sigma_transcript(f.st, sim));
    // Without control of the random oracle the transcript is not a proof.
    EXPECT_FALSE(auth_verify_corrected(f.st, sim));
  }
  const auto real = auth_prove_corrected(f.st, {f.sk, f.rho}, f.rng);
  EXPECT_TRUE(verify_sigma_transcript(f.st, real));
}

TEST(CorrectedAuth, RandomForgeriesRejected) {
  Fixture f;
  for (int i = 0; i < 200; ++i) {
    CorrectedAuthProof p;
    p.commit_sk = G2::generator() * Scalar::random(f.rng);
    p.commit_puf = G1::generator() * Scalar::random(f.rng);
    p.challenge = auth_challenge(f.st, p.commit_sk, p.commit_puf);
    p.resp_sk = Scalar::random(f.rng);
    p.resp_puf = Scalar::random(f.rng);
    p.nonce = f.st.nonce;
    EXPECT_FALSE(auth_verify_corrected(f.st, p));
  }
}

TEST(CorrectedAuth, StolenKeyWithoutPufRejected) {
  Fixture f;
  auto rng = crypto::Rng::from_seed(3);
  EXPECT_FALSE(auth_verify_corrected(f.st, auth_prove_corrected(f.st, {f.sk, Scalar::random(rng)}, rng)));
}

TEST(CorrectedAuth, MalformedEncodingsRejected) {
  Fixture f;
  const Bytes good = auth_prove_corrected(f.st, {f.sk, f.rho}, f.rng).to_bytes();
  EXPECT_THROW(CorrectedAuthProof::from_bytes(ByteSpan(good).first(good.size() - 1)), DecodeError);
  Bytes bad_tag = good;
  bad_tag[0] = 0x01;
  EXPECT_THROW(CorrectedAuthProof::from_bytes(bad_tag), DecodeError);
  std::mt19937_64 gen(4);
  for (int i = 0; i < 200; ++i) {
    Bytes m = good;
    m[gen() % m.size()] ^= static_cast<std::uint8_t>(1U << (gen() % 8));
    bool accepted = false;
    try {
      accepted = auth_verify_corrected(f.st, CorrectedAuthProof::from_bytes(m));
    } catch (const DecodeError&) {
    }
    EXPECT_FALSE(accepted);
  }
}

// ---- corrected tx ----

TEST(CorrectedTx, CompletenessAndBinding) {
  Fixture f;
  TxStatement st{f.st.device_id, f.st.pk, crypto::sha256(as_bytes("pay 5")), fresh_nonce(f.rng)};
  const auto p = tx_prove_corrected(st, f.sk, f.rng);
  EXPECT_TRUE(tx_verify_corrected(st, p));
  EXPECT_TRUE(tx_verify_corrected(st, CorrectedTxProof::from_bytes(p.to_bytes())));
  EXPECT_EQ(p.to_bytes().size(), CorrectedTxProof::kEncodedSize);
  EXPECT_EQ(CorrectedTxProof::kEncodedSize, 161u);

  auto other = st;
  other.payload_digest = crypto::sha256(as_bytes("pay 6"));
  EXPECT_FALSE(tx_verify_corrected(other, p));
  other = st;
  other.nonce[0] ^= 1;
  EXPECT_FALSE(tx_verify_corrected(other, p));
  auto q = p;
  q.resp = q.resp + Scalar::one();
  EXPECT_FALSE(tx_verify_corrected(st, q));
  EXPECT_FALSE(tx_verify_corrected(st, tx_prove_corrected(st, f.sk + Scalar::one(), f.rng)));
}

// ---- signatures ----

TEST(Signature, SignThenVerify) {
  auto rng = crypto::Rng::from_seed(20);
  const Scalar sk = Scalar::random(rng);
  const G2 pk = G2::generator() * sk;
  const auto sig = sign(sk, as_bytes("hello"));
  EXPECT_TRUE(verify_sig(pk, as_bytes("hello"), sig));
  EXPECT_TRUE(verify_sig_bytes(pk, as_bytes("hello"), sig.to_bytes()));
  EXPECT_FALSE(verify_sig_bytes(pk, as_bytes("hello"), ByteSpan(sig.to_bytes()).first(47)));
  EXPECT_FALSE(verify_sig(pk, as_bytes("hello"), Signature{G1::identity()}));
}

TEST(Signature, WrongKeyRejected) {
  auto rng = crypto::Rng::from_seed(21);
  for (int i = 0; i < 100; ++i) {
    const Scalar sk = Scalar::random(rng);
    const G2 other = G2::generator() * Scalar::random(rng);
    EXPECT_FALSE(verify_sig(other, as_bytes("msg"), sign(sk, as_bytes("msg"))));
  }
}

TEST(Signature, MessageMutationsRejected) {
  auto rng = crypto::Rng::from_seed(22);
  const Scalar sk = Scalar::random(rng);
  const G2 pk = G2::generator() * sk;
  const Bytes msg = rng.bytes(64);
  const auto sig = sign(sk, msg);
  for (int i = 0; i < 1000; ++i) {
    Bytes m = msg;
    m[rng.uniform(m.size())] ^= static_cast<std::uint8_t>(1 + rng.uniform(255));
    EXPECT_FALSE(verify_sig(pk, m, sig));
  }
}

}  // namespace
}  // namespace pufzk::zkp
