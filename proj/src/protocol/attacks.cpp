#include "pufzk/protocol/attacks.hpp"

#include "pufzk/protocol/testbed.hpp"

namespace pufzk::protocol {

using group::G1;
using group::Scalar;

namespace {

AuthDecision unregistered(SessionId s) { return {s, false, "unregistered"}; }

void flip_bit(std::span<std::uint8_t> data, std::uint64_t bit) {
  data[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
}

}  // namespace

AuthDecision attack_replay(const Session& recorded, Verifier& verifier, ReplayVariant variant) {
  auto req = recorded.auth_request();
  if (!req) throw std::invalid_argument("recorded session has no AuthRequest");
  if (variant == ReplayVariant::ForgedNonce) {
    const NonceOffer fresh = verifier.offer();
    req->session = fresh.session;
    req->nonce = fresh.nonce;
    if (req->proof.size() == zkp::CorrectedAuthProof::kEncodedSize)
      std::copy(fresh.nonce.begin(), fresh.nonce.end(), req->proof.end() - fresh.nonce.size());
  }
  return verifier.authenticate(*req);
}

const char* impersonation_name(Impersonation s) {
  switch (s) {
    case Impersonation::RandomWitness: return "random-witness";
    case Impersonation::ClonedPuf: return "cloned-puf";
    case Impersonation::StolenKey: return "stolen-key";
    case Impersonation::Simulator: return "simulator";
  }
  return "?";
}

AuthDecision attack_impersonate(const zkp::DeviceId& target, const ledger::Ledger& ledger, Verifier& verifier,
                                Impersonation strategy, crypto::Rng& rng, const Scalar* stolen_sk) {
  const NonceOffer offer = verifier.offer();
  const auto rec = identity::query_identity(ledger, target);
  const auto active = identity::active_subset(ledger, target);
  if (!rec || !active) return unregistered(offer.session);
  const zkp::AuthStatement st{target, rec->pk, rec->commitments[active->subset], active->round, offer.nonce};

  auto own_puf_rho = [&] {
    const puf::PufDevice own(rng.next_u64(), puf::kDefaultNoiseRatio);
    puf::NoiseRng noise(rng.next_u64());
    const auto r = own.respond(rec->subset(active->subset), puf::kDefaultRepetitions, noise);
    return identity::response_scalar(active->subset, r);
  };

  zkp::CorrectedAuthProof proof;
  switch (strategy) {
    case Impersonation::RandomWitness:
      proof = zkp::auth_prove_corrected(st, {Scalar::random(rng), Scalar::random(rng)}, rng);
      break;
    case Impersonation::ClonedPuf:
      proof = zkp::auth_prove_corrected(st, {Scalar::random(rng), own_puf_rho()}, rng);
      break;
    case Impersonation::StolenKey:
      if (!stolen_sk) throw std::invalid_argument("stolen-key scenario needs the key");
      proof = zkp::auth_prove_corrected(st, {*stolen_sk, own_puf_rho()}, rng);
      break;
    case Impersonation::Simulator:
      proof = zkp::simulate_auth_transcript(st, rng);
      break;
  }
  return verifier.authenticate({offer.session, target, proof.to_bytes(), offer.nonce});
}

Session attack_mitm(Device& device, Verifier& verifier, const ledger::Ledger& ledger, const AuthInterceptor& mutate) {
  return run_authentication(device, verifier, ledger, Mode::Corrected, nullptr, mutate);
}

std::pair<AuthDecision, AuthDecision> attack_swap(Device& a, Device& b, Verifier& verifier,
                                                  const ledger::Ledger& ledger) {
  const NonceOffer oa = verifier.offer();
  const NonceOffer ob = verifier.offer();
  AuthRequest ra = a.prove(oa, ledger, Mode::Corrected);
  AuthRequest rb = b.prove(ob, ledger, Mode::Corrected);
  std::swap(ra.proof, rb.proof);
  return {verifier.authenticate(ra), verifier.authenticate(rb)};
}

Session attack_tamper(Device& device, Verifier& verifier, const Session& auth, ByteSpan payload,
                      const TxInterceptor& mutate) {
  return run_transaction(device, verifier, auth, payload, Mode::Corrected, nullptr, mutate);
}

// ---- suite ----

namespace {

ScenarioResult scenario(std::string suite, std::string name, Mode mode = Mode::Corrected) {
  ScenarioResult r;
  r.suite = std::move(suite);
  r.name = std::move(name);
  r.mode = mode;
  return r;
}

ScenarioResult control(std::string suite, std::string name, Mode mode = Mode::Corrected) {
  auto r = scenario(std::move(suite), std::move(name), mode);
  r.security = false;
  r.expect_accept = true;
  return r;
}

TestbedOptions testbed_options(std::uint64_t seed, bool literal = false, std::optional<Scalar> alpha = std::nullopt) {
  TestbedOptions t;
  t.seed = seed;
  t.literal = literal;
  t.alpha = alpha;
  return t;
}

void tally(ScenarioResult& r, bool accepted) {
  ++r.trials;
  if (accepted) ++r.accepted;
}

Bytes sample_payload(crypto::Rng& rng) {
  Bytes p = rng.bytes(32);
  const std::string_view prefix = "reading:";
  p.insert(p.begin(), prefix.begin(), prefix.end());
  return p;
}

void corrected_suites(const SuiteOptions& o, std::vector<ScenarioResult>& out) {
  Testbed tb(testbed_options(o.seed));
  auto& rng = tb.rng();
  std::vector<Device> devices;
  for (int i = 0; i < 4; ++i) devices.push_back(tb.enroll(rng.next_u64()));
  const int n = static_cast<int>(devices.size());
  const int variants = std::max(1, o.replay_trials);

  if (o.suites.contains("replay")) {
    auto honest = control("replay", "honest-session");
    auto verbatim = scenario("replay", "verbatim");
    auto forged = scenario("replay", "forged-nonce");
    for (int i = 0; i < o.replay_trials; ++i) {
      const Session s = tb.authenticate(devices[i % n], Mode::Corrected);
      tally(honest, s.accepted());
      tally(verbatim, attack_replay(s, tb.verifier(), ReplayVariant::Verbatim).accept);
      tally(forged, attack_replay(s, tb.verifier(), ReplayVariant::ForgedNonce).accept);
    }
    out.insert(out.end(), {honest, verbatim, forged});
  }

  if (o.suites.contains("impersonate")) {
    const auto& target = devices[0];
    for (auto strategy : {Impersonation::RandomWitness, Impersonation::ClonedPuf, Impersonation::StolenKey,
                          Impersonation::Simulator}) {
      auto r = scenario("impersonate", impersonation_name(strategy));
      const int trials = strategy == Impersonation::RandomWitness ? o.forgery_trials : variants;
      for (int i = 0; i < trials; ++i) {
        const Scalar sk = target.secret_key();
        tally(r, attack_impersonate(target.id(), tb.ledger(), tb.verifier(), strategy, rng, &sk).accept);
      }
      out.push_back(r);
    }
  }

  if (o.suites.contains("mitm")) {
    auto pass = control("mitm", "pass-through");
    for (int i = 0; i < std::max(1, variants / 10); ++i)
      tally(pass, attack_mitm(devices[i % n], tb.verifier(), tb.ledger(), {}).accepted());

    auto flips = scenario("mitm", "bit-flip");
    for (int i = 0; i < o.mitm_flips; ++i) {
      const std::uint64_t bit = rng.uniform((32 + zkp::CorrectedAuthProof::kEncodedSize + 16) * 8);
      const auto mutate = [bit](AuthRequest& req) {
        if (bit < 256) return flip_bit(req.device_id, bit);
        if (bit < 256 + req.proof.size() * 8) return flip_bit(req.proof, bit - 256);
        flip_bit(req.nonce, bit - 256 - req.proof.size() * 8);
      };
      tally(flips, attack_mitm(devices[i % n], tb.verifier(), tb.ledger(), mutate).accepted());
    }

    auto swap = scenario("mitm", "proof-swap");
    for (int i = 0; i < std::max(1, variants / 2); ++i) {
      const auto [a, b] = attack_swap(devices[i % n], devices[(i + 1) % n], tb.verifier(), tb.ledger());
      tally(swap, a.accept);
      tally(swap, b.accept);
    }
    out.insert(out.end(), {pass, flips, swap});
  }

  if (o.suites.contains("tamper")) {
    auto honest = control("tamper", "honest-transaction");
    auto payload = scenario("tamper", "payload-byte");
    auto record = scenario("tamper", "record-byte");
    auto resubmit = scenario("tamper", "resubmission");
    auto unauth = scenario("tamper", "unauthenticated");

    Device& d = devices[0];
    Session auth = tb.authenticate(d, Mode::Corrected);
    for (int i = 0; i < std::max(1, o.tamper_trials / 10); ++i) {
      const Bytes body = sample_payload(rng);
      const Session s = tb.transact(d, auth, body, Mode::Corrected);
      tally(honest, s.accepted());
      const auto sub = std::get<TxSubmit>(decode_message(s.transcript.front().message));
      tally(resubmit, tb.verifier().submit(sub).accept);

      TxSubmit stray = sub;
      stray.session = auth.id + 1'000'000;
      tally(unauth, tb.verifier().submit(stray).accept);
    }

    for (int i = 0; i < o.tamper_trials; ++i) {
      const auto before = tb.ledger().state_digest();
      const Bytes body = sample_payload(rng);
      const std::size_t pos = rng.uniform(body.size());
      const auto delta = static_cast<std::uint8_t>(1 + rng.uniform(255));
      const Session s = attack_tamper(d, tb.verifier(), auth, body, [&](TxSubmit& m) { m.record.payload[pos] ^= delta; });
      tally(payload, s.accepted() || tb.ledger().state_digest() != before);
    }

    for (int i = 0; i < o.tamper_trials; ++i) {
      const auto before = tb.ledger().state_digest();
      const Bytes body = sample_payload(rng);
      attack_tamper(d, tb.verifier(), auth, body, [&](TxSubmit& m) {
        Bytes enc = m.record.encode();
        enc[rng.uniform(enc.size())] ^= static_cast<std::uint8_t>(1 + rng.uniform(255));
        try {
          m.record = ledger::TransactionRecord::decode(enc);
        } catch (const DecodeError&) {
          m.record.chaincode = "<undecodable>";  // dropped on the wire
        }
      });
      tally(record, tb.ledger().state_digest() != before);
    }
    out.insert(out.end(), {honest, payload, record, resubmit, unauth});
  }
}

void literal_suite(const SuiteOptions& o, std::vector<ScenarioResult>& out) {
  const int trials = std::max(1, o.replay_trials / 10);

  Testbed unit(testbed_options(o.seed + 1, true, Scalar::one()));
  Device d1 = unit.enroll(unit.rng().next_u64());
  auto honest = control("literal", "honest-alpha-one", Mode::Literal);
  auto replay = control("literal", "replay-accepted", Mode::Literal);
  auto forgery = control("literal", "public-forgery", Mode::Literal);
  for (int i = 0; i < trials; ++i) {
    const Session s = unit.authenticate(d1, Mode::Literal);
    tally(honest, s.accepted());
    tally(replay, attack_replay(s, unit.verifier(), ReplayVariant::ForgedNonce).accept);

    // V = S + h*U from public values only.
    zkp::SigmaProof p;
    p.S = G1::generator() * Scalar::random(unit.rng());
    p.U = G1::generator() * Scalar::random(unit.rng());
    p.V = p.S + p.U * zkp::literal_challenge(p.S, p.U);
    const NonceOffer offer = unit.verifier().offer();
    tally(forgery, unit.verifier().authenticate({offer.session, d1.id(), p.to_bytes(), offer.nonce}).accept);
  }

  Testbed random(testbed_options(o.seed + 2, true));
  Device d2 = random.enroll(random.rng().next_u64());
  auto rejected = scenario("literal", "honest-alpha-random-rejected", Mode::Literal);
  rejected.security = false;
  for (int i = 0; i < trials; ++i) tally(rejected, random.authenticate(d2, Mode::Literal).accepted());

  out.insert(out.end(), {honest, rejected, replay, forgery});
}

}  // namespace

std::vector<ScenarioResult> run_attack_suite(const SuiteOptions& o) {
  std::vector<ScenarioResult> out;
  if (o.suites.contains("replay") || o.suites.contains("impersonate") || o.suites.contains("mitm") ||
      o.suites.contains("tamper"))
    corrected_suites(o, out);
  if (o.suites.contains("literal")) literal_suite(o, out);
  return out;
}

bool defenses_hold(const std::vector<ScenarioResult>& results) {
  for (const auto& r : results)
    if (r.security && !r.passed()) return false;
  return true;
}

}  // namespace pufzk::protocol
