#include "pufzk/protocol/engine.hpp"

#include <chrono>

namespace pufzk::protocol {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

AuthDecision reject(SessionId s, std::string reason) { return {s, false, std::move(reason)}; }

}  // namespace

// ---- device ----

Device::Device(puf::PufDevice puf, identity::DeviceIdentity identity, std::uint64_t seed)
    : puf_(std::move(puf)), identity_(std::move(identity)), noise_(seed), rng_(crypto::Rng::from_seed(seed)) {}

AuthRequest Device::prove(const NonceOffer& offer, const ledger::Ledger& ledger, Mode mode,
                          const zkp::TrustSetup* literal) {
  auto t = Clock::now();
  const auto rec = identity::query_identity(ledger, id());
  const auto active = identity::active_subset(ledger, id());
  if (!rec || !active) throw std::runtime_error("device is not registered");
  const puf::ChallengeSet challenges = rec->subset(active->subset);
  timings_.challenge_ms = ms_since(t);

  t = Clock::now();
  const puf::ResponseSet r = puf_.respond(challenges, repetitions_, noise_);
  timings_.response_ms = ms_since(t);

  AuthRequest req{offer.session, id(), {}, offer.nonce};
  if (mode == Mode::Literal) {
    if (!literal) throw std::invalid_argument("literal mode needs a trust setup");
    t = Clock::now();
    const Bytes packed = puf::pack_bits(r);
    timings_.prep_ms = ms_since(t);
    t = Clock::now();
    req.proof = zkp::auth_prove_literal(*literal, packed, identity_.sk, rng_).to_bytes();
    timings_.proof_ms = ms_since(t);
    return req;
  }

  t = Clock::now();
  const zkp::AuthStatement st{id(), rec->pk, rec->commitments[active->subset], active->round, offer.nonce};
  const zkp::AuthWitness w{identity_.sk, identity::response_scalar(active->subset, r)};
  timings_.prep_ms = ms_since(t);
  t = Clock::now();
  req.proof = zkp::auth_prove_corrected(st, w, rng_).to_bytes();
  timings_.proof_ms = ms_since(t);
  return req;
}

ledger::TransactionRecord Device::make_transaction(ByteSpan payload, Mode mode, const zkp::TrustSetup* literal) {
  ledger::TransactionRecord tx;
  tx.chaincode = std::string(chaincode::kTransact);
  tx.payload.assign(payload.begin(), payload.end());
  tx.submitter = id();
  rng_.fill(tx.nonce);
  const auto sig = zkp::sign(identity_.sk, chaincode::tx_signing_message(tx.submitter, tx.nonce, tx.payload));
  const auto sig_bytes = sig.to_bytes();
  tx.signature.assign(sig_bytes.begin(), sig_bytes.end());
  if (mode == Mode::Literal) {
    if (!literal) throw std::invalid_argument("literal mode needs a trust setup");
    tx.proof = zkp::tx_prove_literal(*literal, tx.payload, rng_).to_bytes();
  } else {
    const zkp::TxStatement st{tx.submitter, identity_.record.pk, crypto::sha256(tx.payload), tx.nonce};
    tx.proof = zkp::tx_prove_corrected(st, identity_.sk, rng_).to_bytes();
  }
  return tx;
}

// ---- sessions ----

const char* direction_name(Direction d) { return d == Direction::ToVerifier ? "d2v" : "v2d"; }

std::optional<AuthRequest> Session::auth_request() const {
  for (const auto& e : transcript) {
    if (e.message.empty() || e.message[0] != static_cast<std::uint8_t>(MessageTag::AuthRequest)) continue;
    return std::get<AuthRequest>(decode_message(e.message));
  }
  return std::nullopt;
}

// ---- verifier ----

Verifier::Verifier(ledger::Ledger& ledger, std::uint64_t seed, std::optional<group::G2> literal_setup_pk)
    : ledger_(ledger), literal_pk_(std::move(literal_setup_pk)), rng_(crypto::Rng::from_seed(seed)) {}

NonceOffer Verifier::offer() {
  std::lock_guard lock(mu_);
  NonceOffer o{next_session_++, {}};
  do rng_.fill(o.nonce);
  while (nonces_.contains(o.nonce));
  nonces_[o.nonce] = {o.session, false};
  return o;
}

AuthDecision Verifier::authenticate(const AuthRequest& req) {
  {
    std::lock_guard lock(mu_);
    auto it = nonces_.find(req.nonce);
    if (it == nonces_.end()) return reject(req.session, "unknown nonce");
    if (it->second.used) return reject(req.session, "stale nonce");
    it->second.used = true;
    if (it->second.session != req.session) return reject(req.session, "session mismatch");
  }

  const auto start = Clock::now();
  const auto rec = identity::query_identity(ledger_, req.device_id);
  const auto active = identity::active_subset(ledger_, req.device_id);
  if (!rec || !active) return reject(req.session, "unregistered");
  if (req.proof.empty()) return reject(req.session, "malformed");

  bool ok = false;
  try {
    switch (static_cast<Mode>(req.proof[0])) {
      case Mode::Literal:
        if (!literal_pk_) return reject(req.session, "literal mode not accepted");
        ok = zkp::verify_literal(*literal_pk_, zkp::SigmaProof::from_bytes(req.proof));
        break;
      case Mode::Corrected: {
        const zkp::AuthStatement st{req.device_id, rec->pk, rec->commitments[active->subset], active->round,
                                    req.nonce};
        ok = zkp::auth_verify_corrected(st, zkp::CorrectedAuthProof::from_bytes(req.proof));
        break;
      }
      default:
        return reject(req.session, "malformed");
    }
  } catch (const DecodeError&) {
    return reject(req.session, "malformed");
  }
  const double verify_ms = ms_since(start);
  if (!ok) return reject(req.session, "invalid proof");

  std::lock_guard lock(mu_);
  last_verify_ms_ = verify_ms;
  try {
    chaincode::rotate_challenges(ledger_, req.device_id, rng_);
  } catch (const std::runtime_error& e) {
    return reject(req.session, e.what());
  }
  authenticated_[req.session] = req.device_id;
  return {req.session, true, "accepted"};
}

TxDecision Verifier::submit(const TxSubmit& msg) {
  {
    std::lock_guard lock(mu_);
    const auto it = authenticated_.find(msg.session);
    if (it == authenticated_.end()) return {msg.session, false, "unauthenticated", 0};
    if (it->second != msg.record.submitter) return {msg.session, false, "session belongs to another device", 0};
  }
  if (msg.record.chaincode != chaincode::kTransact) return {msg.session, false, "not a transaction", 0};
  const auto res = ledger_.invoke(chaincode::kTransact, msg.record);
  if (!res) return {msg.session, false, std::string(ledger::status_name(res.status)) + ": " + res.reason, 0};
  return {msg.session, true, "committed", res.height};
}

bool Verifier::is_authenticated(SessionId session) const {
  std::lock_guard lock(mu_);
  return authenticated_.contains(session);
}

// ---- drivers ----

Session run_authentication(Device& device, Verifier& verifier, const ledger::Ledger& ledger, Mode mode,
                           const zkp::TrustSetup* literal, const AuthInterceptor& intercept) {
  Session s;
  s.mode = mode;
  const NonceOffer offer = verifier.offer();
  s.id = offer.session;
  s.nonce = offer.nonce;
  s.record(Direction::ToDevice, offer);
  if (const auto active = identity::active_subset(ledger, device.id())) s.subset = *active;

  AuthRequest req = device.prove(offer, ledger, mode, literal);
  if (intercept) intercept(req);
  s.record(Direction::ToVerifier, req);

  const AuthDecision d = verifier.authenticate(req);
  s.record(Direction::ToDevice, d);
  s.outcome = d.accept ? Outcome::Accepted : Outcome::Rejected;
  s.reason = d.reason;
  return s;
}

Session run_transaction(Device& device, Verifier& verifier, const Session& auth, ByteSpan payload, Mode mode,
                        const zkp::TrustSetup* literal, const TxInterceptor& intercept) {
  Session s;
  s.id = auth.id;
  s.nonce = auth.nonce;
  s.mode = mode;
  s.subset = auth.subset;

  TxSubmit msg{auth.id, device.make_transaction(payload, mode, literal)};
  if (intercept) intercept(msg);
  s.record(Direction::ToVerifier, msg);

  const TxDecision d = verifier.submit(msg);
  s.record(Direction::ToDevice, d);
  s.outcome = d.accept ? Outcome::Accepted : Outcome::Rejected;
  s.reason = d.reason;
  return s;
}

}  // namespace pufzk::protocol
