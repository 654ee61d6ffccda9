#pragma once

// Authentication and transaction sessions between device actors, a verifier
// and the ledger.
//
// Authentication:
//   device -> verifier   (session request)
//   verifier -> device   NonceOffer{session, nonce}
//   device               reads its record and active subset from the ledger,
//                        regenerates R_k, builds the proof
//   device -> verifier   AuthRequest{session, id, proof, nonce}
//   verifier             consumes the nonce, reads (pk, C, W_k, round) from
//                        the ledger, verifies; on accept rotates the subset
//   verifier -> device   AuthDecision
//
// Transactions go through the verifier, which only forwards TxSubmit to the
// ledger for a session that authenticated the submitting device.

#include <functional>
#include <map>
#include <mutex>

#include "pufzk/chaincode/builtin.hpp"
#include "pufzk/protocol/messages.hpp"

namespace pufzk::protocol {

using zkp::Mode;

// Device-side actor. Holds the PUF and the secret key; nothing here is handed
// to adversary code.
class Device {
 public:
  Device(puf::PufDevice puf, identity::DeviceIdentity identity, std::uint64_t seed);

  const zkp::DeviceId& id() const { return identity_.id(); }
  const identity::DeviceRecord& record() const { return identity_.record; }
  // Only for the stolen-key scenario.
  const group::Scalar& secret_key() const { return identity_.sk; }

  // Builds the AuthRequest answering `offer` for the subset active on the
  // ledger. `literal` is required for Mode::Literal.
  AuthRequest prove(const NonceOffer& offer, const ledger::Ledger& ledger, Mode mode,
                    const zkp::TrustSetup* literal = nullptr);
  ledger::TransactionRecord make_transaction(ByteSpan payload, Mode mode, const zkp::TrustSetup* literal = nullptr);

  // Stages of the last prove() call, in milliseconds.
  struct ProveTimings {
    double challenge_ms = 0, response_ms = 0, prep_ms = 0, proof_ms = 0;
  };
  const ProveTimings& last_timings() const { return timings_; }

 private:
  puf::PufDevice puf_;
  identity::DeviceIdentity identity_;
  puf::NoiseRng noise_;
  crypto::Rng rng_;
  int repetitions_ = puf::kDefaultRepetitions;
  ProveTimings timings_;
};

enum class Direction : std::uint8_t { ToVerifier = 0, ToDevice = 1 };
const char* direction_name(Direction d);

struct TranscriptEntry {
  Direction dir = Direction::ToVerifier;
  Bytes message;
};

enum class Outcome { Pending, Accepted, Rejected };

struct Session {
  SessionId id = 0;
  zkp::Nonce nonce{};
  Mode mode = Mode::Corrected;
  identity::ActiveSubset subset;  // subset the proof was built for
  std::vector<TranscriptEntry> transcript;  // append-only
  Outcome outcome = Outcome::Pending;
  std::string reason;

  void record(Direction dir, const Message& m) { transcript.push_back({dir, encode_message(m)}); }
  bool accepted() const { return outcome == Outcome::Accepted; }
  // First AuthRequest in the transcript.
  std::optional<AuthRequest> auth_request() const;
};

class Verifier {
 public:
  // Literal proofs are accepted only when a literal setup key is given.
  Verifier(ledger::Ledger& ledger, std::uint64_t seed, std::optional<group::G2> literal_setup_pk = std::nullopt);

  NonceOffer offer();
  AuthDecision authenticate(const AuthRequest& req);
  TxDecision submit(const TxSubmit& msg);

  bool is_authenticated(SessionId session) const;
  double last_verify_ms() const { return last_verify_ms_; }

 private:
  struct NonceState {
    SessionId session = 0;
    bool used = false;
  };

  ledger::Ledger& ledger_;
  std::optional<group::G2> literal_pk_;
  mutable std::mutex mu_;
  crypto::Rng rng_;
  SessionId next_session_ = 1;
  std::map<zkp::Nonce, NonceState> nonces_;
  std::map<SessionId, zkp::DeviceId> authenticated_;
  double last_verify_ms_ = 0;
};

using AuthInterceptor = std::function<void(AuthRequest&)>;
using TxInterceptor = std::function<void(TxSubmit&)>;

Session run_authentication(Device& device, Verifier& verifier, const ledger::Ledger& ledger, Mode mode,
                           const zkp::TrustSetup* literal = nullptr, const AuthInterceptor& intercept = {});

// Runs in the authenticated session `auth`; the returned session carries the
// same id and holds the TxSubmit / TxDecision exchange.
Session run_transaction(Device& device, Verifier& verifier, const Session& auth, ByteSpan payload, Mode mode,
                        const zkp::TrustSetup* literal = nullptr, const TxInterceptor& intercept = {});

}  // namespace pufzk::protocol
