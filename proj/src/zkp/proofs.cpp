#include "pufzk/zkp/proofs.hpp"

#include <chrono>

namespace pufzk::zkp {

namespace {

using group::hash_to_g1;
using group::hash_to_scalar;
using group::pair;
namespace tags = group::tags;

constexpr std::string_view kAuthContext = "PUFZK-V1/auth";
constexpr std::string_view kTxContext = "PUFZK-V1/tx";

const G1& g1() { return G1::generator(); }
const G2& g2() { return G2::generator(); }

void expect_tag(ByteReader& r, Mode m) {
  if (r.u8() != static_cast<std::uint8_t>(m)) throw DecodeError("unexpected proof mode tag");
}

SigmaProof prove_literal(const G1& base, crypto::Rng& rng) {
  const Scalar r = Scalar::random(rng);
  SigmaProof p;
  p.S = base * r;
  p.U = g1() * r;
  const Scalar h = literal_challenge(p.S, p.U);
  p.V = (base + g1() * h) * r;
  return p;
}

}  // namespace

const char* mode_name(Mode m) { return m == Mode::Literal ? "literal" : "corrected"; }

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "literal") return Mode::Literal;
  if (name == "corrected") return Mode::Corrected;
  return std::nullopt;
}

TrustSetup TrustSetup::generate(crypto::Rng& rng) {
  const auto start = std::chrono::steady_clock::now();
  TrustSetup s = with_alpha(Scalar::random(rng));
  s.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return s;
}

TrustSetup TrustSetup::with_alpha(const Scalar& alpha) { return {alpha, g2() * alpha, 0.0}; }

// ---- literal ----

Bytes SigmaProof::to_bytes() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(Mode::Literal)).raw(S.to_bytes()).raw(U.to_bytes()).raw(V.to_bytes());
  return std::move(w).take();
}

SigmaProof SigmaProof::from_bytes(ByteSpan data) {
  if (data.size() != kEncodedSize) throw DecodeError("literal proof has wrong length");
  ByteReader r(data);
  expect_tag(r, Mode::Literal);
  SigmaProof p;
  p.S = G1::from_bytes(r.raw(G1::kEncodedSize));
  p.U = G1::from_bytes(r.raw(G1::kEncodedSize));
  p.V = G1::from_bytes(r.raw(G1::kEncodedSize));
  return p;
}

Scalar literal_challenge(const G1& S, const G1& U) {
  Bytes su;
  append(su, S.to_bytes());
  append(su, U.to_bytes());
  return hash_to_scalar(su, tags::kLiteralChallenge);
}

SigmaProof auth_prove_literal(const TrustSetup&, ByteSpan responses, const Scalar& sk, crypto::Rng& rng) {
  Bytes input(responses.begin(), responses.end());
  append(input, sk.to_bytes());
  return prove_literal(hash_to_g1(input, tags::kLiteralAuthBase), rng);
}

SigmaProof tx_prove_literal(const TrustSetup&, ByteSpan payload, crypto::Rng& rng) {
  return prove_literal(hash_to_g1(payload, tags::kLiteralTxBase), rng);
}

bool verify_literal(const G2& setup_pk, const SigmaProof& proof) {
  const Scalar h = literal_challenge(proof.S, proof.U);
  return pair(proof.S, g2()) * pair(proof.U, setup_pk).pow(h) == pair(proof.V, g2());
}

bool auth_verify_literal(const TrustSetup& setup, const SigmaProof& proof) { return verify_literal(setup.pk, proof); }
bool tx_verify_literal(const TrustSetup& setup, const SigmaProof& proof) { return verify_literal(setup.pk, proof); }

bool verify_literal_bytes(const G2& setup_pk, ByteSpan proof) {
  try {
    return verify_literal(setup_pk, SigmaProof::from_bytes(proof));
  } catch (const DecodeError&) {
    return false;
  }
}

// ---- corrected auth ----

Bytes CorrectedAuthProof::to_bytes() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(Mode::Corrected))
      .raw(commit_sk.to_bytes())
      .raw(commit_puf.to_bytes())
      .raw(challenge.to_bytes())
      .raw(resp_sk.to_bytes())
      .raw(resp_puf.to_bytes())
      .raw(nonce);
  return std::move(w).take();
}

CorrectedAuthProof CorrectedAuthProof::from_bytes(ByteSpan data) {
  if (data.size() != kEncodedSize) throw DecodeError("auth proof has wrong length");
  ByteReader r(data);
  expect_tag(r, Mode::Corrected);
  CorrectedAuthProof p;
  p.commit_sk = G2::from_bytes(r.raw(G2::kEncodedSize));
  p.commit_puf = G1::from_bytes(r.raw(G1::kEncodedSize));
  p.challenge = Scalar::from_bytes(r.raw(Scalar::kEncodedSize));
  p.resp_sk = Scalar::from_bytes(r.raw(Scalar::kEncodedSize));
  p.resp_puf = Scalar::from_bytes(r.raw(Scalar::kEncodedSize));
  p.nonce = r.fixed<16>();
  return p;
}

Scalar auth_challenge(const AuthStatement& st, const G2& commit_sk, const G1& commit_puf) {
  ByteWriter w;
  w.field(kAuthContext)
      .raw(st.device_id)
      .raw(st.pk.to_bytes())
      .raw(st.W.to_bytes())
      .u32(st.round)
      .raw(st.nonce)
      .raw(commit_sk.to_bytes())
      .raw(commit_puf.to_bytes());
  return hash_to_scalar(w.bytes(), tags::kAuthChallenge);
}

CorrectedAuthProof auth_prove_corrected(const AuthStatement& st, const AuthWitness& w, crypto::Rng& rng) {
  const Scalar k_sk = Scalar::random(rng);
  const Scalar k_puf = Scalar::random(rng);
  CorrectedAuthProof p;
  p.commit_sk = g2() * k_sk;
  p.commit_puf = g1() * k_puf;
  p.challenge = auth_challenge(st, p.commit_sk, p.commit_puf);
  p.resp_sk = k_sk + p.challenge * w.sk;
  p.resp_puf = k_puf + p.challenge * w.rho;
  p.nonce = st.nonce;
  return p;
}

bool verify_sigma_transcript(const AuthStatement& st, const CorrectedAuthProof& p) {
  return g2() * p.resp_sk == p.commit_sk + st.pk * p.challenge &&
         g1() * p.resp_puf == p.commit_puf + st.W * p.challenge;
}

bool auth_verify_corrected(const AuthStatement& st, const CorrectedAuthProof& p) {
  if (p.nonce != st.nonce) return false;
  if (p.challenge != auth_challenge(st, p.commit_sk, p.commit_puf)) return false;
  return verify_sigma_transcript(st, p);
}

CorrectedAuthProof simulate_auth_transcript(const AuthStatement& st, crypto::Rng& rng) {
  CorrectedAuthProof p;
  p.challenge = Scalar::random(rng);
  p.resp_sk = Scalar::random(rng);
  p.resp_puf = Scalar::random(rng);
  p.commit_sk = g2() * p.resp_sk - st.pk * p.challenge;
  p.commit_puf = g1() * p.resp_puf - st.W * p.challenge;
  p.nonce = st.nonce;
  return p;
}

// ---- corrected tx ----

Bytes CorrectedTxProof::to_bytes() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(Mode::Corrected)).raw(commit.to_bytes()).raw(challenge.to_bytes()).raw(resp.to_bytes());
  return std::move(w).take();
}

CorrectedTxProof CorrectedTxProof::from_bytes(ByteSpan data) {
  if (data.size() != kEncodedSize) throw DecodeError("tx proof has wrong length");
  ByteReader r(data);
  expect_tag(r, Mode::Corrected);
  CorrectedTxProof p;
  p.commit = G2::from_bytes(r.raw(G2::kEncodedSize));
  p.challenge = Scalar::from_bytes(r.raw(Scalar::kEncodedSize));
  p.resp = Scalar::from_bytes(r.raw(Scalar::kEncodedSize));
  return p;
}

namespace {
Scalar tx_challenge(const TxStatement& st, const G2& commit) {
  ByteWriter w;
  w.field(kTxContext).raw(st.device_id).raw(st.pk.to_bytes()).raw(st.payload_digest).raw(st.nonce).raw(commit.to_bytes());
  return hash_to_scalar(w.bytes(), tags::kTxChallenge);
}
}  // namespace

CorrectedTxProof tx_prove_corrected(const TxStatement& st, const Scalar& sk, crypto::Rng& rng) {
  const Scalar k = Scalar::random(rng);
  CorrectedTxProof p;
  p.commit = g2() * k;
  p.challenge = tx_challenge(st, p.commit);
  p.resp = k + p.challenge * sk;
  return p;
}

bool tx_verify_corrected(const TxStatement& st, const CorrectedTxProof& p) {
  if (p.challenge != tx_challenge(st, p.commit)) return false;
  return g2() * p.resp == p.commit + st.pk * p.challenge;
}

// ---- signatures ----

Signature sign(const Scalar& sk, ByteSpan message) { return {hash_to_g1(message, tags::kSignature) * sk}; }

bool verify_sig(const G2& pk, ByteSpan message, const Signature& s) {
  if (s.sig.is_identity() || pk.is_identity()) return false;
  // e(sig, g2) == e(H(m), pk)  <=>  e(sig, -g2) * e(H(m), pk) == 1
  const std::array<G1, 2> a{s.sig, hash_to_g1(message, tags::kSignature)};
  const std::array<G2, 2> b{-g2(), pk};
  return group::multi_pair(a, b) == Gt::one();
}

bool verify_sig_bytes(const G2& pk, ByteSpan message, ByteSpan sig) {
  try {
    return verify_sig(pk, message, Signature::from_bytes(sig));
  } catch (const DecodeError&) {
    return false;
  }
}

}  // namespace pufzk::zkp
