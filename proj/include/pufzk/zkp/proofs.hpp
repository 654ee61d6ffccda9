#pragma once

// Proof schemes for device authentication and transactions.
//
// Literal mode implements the single-equation (S, U, V) construction exactly,
// including its defects: honest proofs verify only when alpha = 1, and
// V = S + h*U is computable from public data. It is kept for comparison and
// benchmarking and must not be used to make security decisions.
//
// Corrected mode is an AND-composition of Schnorr proofs made non-interactive
// with Fiat-Shamir:
//   auth: knowledge of sk with pk = sk*g2, and of rho with W = rho*g1,
//         challenge bound to (device_id, pk, W, round, nonce, commitments)
//   tx:   knowledge of sk, challenge bound to (device_id, pk, digest(T), nonce)
//
// Wire encodings start with a one-byte mode tag and have a fixed length.

#include <array>
#include <optional>

#include "pufzk/crypto/sha256.hpp"
#include "pufzk/group/pairing_group.hpp"

namespace pufzk::zkp {

using group::G1;
using group::G2;
using group::Gt;
using group::Scalar;

enum class Mode : std::uint8_t { Literal = 0x01, Corrected = 0x02 };

const char* mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view name);

using Nonce = std::array<std::uint8_t, 16>;
using DeviceId = crypto::Digest;

struct TrustSetup {
  Scalar alpha;  // trapdoor; honest deployments discard it
  G2 pk;         // alpha * g2
  double duration_ms = 0.0;

  static TrustSetup generate(crypto::Rng& rng);
  static TrustSetup with_alpha(const Scalar& alpha);
};

// ---- literal mode ----------------------------------------------------------

struct SigmaProof {
  static constexpr std::size_t kEncodedSize = 1 + 3 * G1::kEncodedSize;

  G1 S, U, V;

  Bytes to_bytes() const;
  static SigmaProof from_bytes(ByteSpan data);  // throws DecodeError
  friend bool operator==(const SigmaProof&, const SigmaProof&) = default;
};

// h = H(S || U) as a scalar.
Scalar literal_challenge(const G1& S, const G1& U);

SigmaProof auth_prove_literal(const TrustSetup& setup, ByteSpan responses, const Scalar& sk, crypto::Rng& rng);
SigmaProof tx_prove_literal(const TrustSetup& setup, ByteSpan payload, crypto::Rng& rng);
// e(S, g2) * e(U, pk)^h == e(V, g2)
bool verify_literal(const G2& setup_pk, const SigmaProof& proof);
bool auth_verify_literal(const TrustSetup& setup, const SigmaProof& proof);
bool tx_verify_literal(const TrustSetup& setup, const SigmaProof& proof);
bool verify_literal_bytes(const G2& setup_pk, ByteSpan proof);

// ---- corrected mode: authentication ------------------------------------------

struct AuthStatement {
  DeviceId device_id{};
  G2 pk;
  G1 W;  // response commitment of the active challenge subset
  std::uint32_t round = 0;  // rotation counter, so old proofs go stale
  Nonce nonce{};
};

struct AuthWitness {
  Scalar sk;
  Scalar rho;  // hash_to_scalar of the subset's response bits
};

struct CorrectedAuthProof {
  static constexpr std::size_t kEncodedSize =
      1 + G2::kEncodedSize + G1::kEncodedSize + 3 * Scalar::kEncodedSize + std::tuple_size_v<Nonce>;

  G2 commit_sk;
  G1 commit_puf;
  Scalar challenge;
  Scalar resp_sk;
  Scalar resp_puf;
  Nonce nonce{};

  Bytes to_bytes() const;
  static CorrectedAuthProof from_bytes(ByteSpan data);
  friend bool operator==(const CorrectedAuthProof&, const CorrectedAuthProof&) = default;
};

Scalar auth_challenge(const AuthStatement& st, const G2& commit_sk, const G1& commit_puf);
CorrectedAuthProof auth_prove_corrected(const AuthStatement& st, const AuthWitness& w, crypto::Rng& rng);
bool auth_verify_corrected(const AuthStatement& st, const CorrectedAuthProof& proof);

// Checks only the two Schnorr relations, not how the challenge was derived.
bool verify_sigma_transcript(const AuthStatement& st, const CorrectedAuthProof& proof);
// Honest-verifier simulator: a transcript for an arbitrary challenge, built
// without the witness.
CorrectedAuthProof simulate_auth_transcript(const AuthStatement& st, crypto::Rng& rng);

// ---- corrected mode: transactions --------------------------------------------

struct TxStatement {
  DeviceId device_id{};
  G2 pk;
  crypto::Digest payload_digest{};
  Nonce nonce{};
};

struct CorrectedTxProof {
  static constexpr std::size_t kEncodedSize = 1 + G2::kEncodedSize + 2 * Scalar::kEncodedSize;

  G2 commit;
  Scalar challenge;
  Scalar resp;

  Bytes to_bytes() const;
  static CorrectedTxProof from_bytes(ByteSpan data);
  friend bool operator==(const CorrectedTxProof&, const CorrectedTxProof&) = default;
};

CorrectedTxProof tx_prove_corrected(const TxStatement& st, const Scalar& sk, crypto::Rng& rng);
bool tx_verify_corrected(const TxStatement& st, const CorrectedTxProof& proof);

// ---- signatures ------------------------------------------------------------------

struct Signature {
  static constexpr std::size_t kEncodedSize = G1::kEncodedSize;
  G1 sig;

  G1::Encoding to_bytes() const { return sig.to_bytes(); }
  static Signature from_bytes(ByteSpan data) { return {G1::from_bytes(data)}; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature sign(const Scalar& sk, ByteSpan message);
// e(sig, g2) == e(H(message), pk)
bool verify_sig(const G2& pk, ByteSpan message, const Signature& sig);
bool verify_sig_bytes(const G2& pk, ByteSpan message, ByteSpan sig);

}  // namespace pufzk::zkp
