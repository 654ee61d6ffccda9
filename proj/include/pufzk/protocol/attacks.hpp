#pragma once

// Adversary scripts. Each works from public data only: the ledger (device
// records, challenge sets, commitments), recorded transcripts and messages
// it can see or alter in flight. The exceptions are spelled out in the
// signature (a stolen key is passed in explicitly).

#include <set>

#include "pufzk/protocol/engine.hpp"

namespace pufzk::protocol {

enum class ReplayVariant {
  Verbatim,     // resend the recorded AuthRequest unchanged
  ForgedNonce,  // take a fresh nonce and write it into the request and proof
};

AuthDecision attack_replay(const Session& recorded, Verifier& verifier, ReplayVariant variant);

enum class Impersonation {
  RandomWitness,  // well-formed proof over random (sk, rho)
  ClonedPuf,      // own PUF answering the target's public challenges, random sk
  StolenKey,      // target's sk, own PUF
  Simulator,      // simulated transcript for the target's statement
};

const char* impersonation_name(Impersonation s);

AuthDecision attack_impersonate(const zkp::DeviceId& target, const ledger::Ledger& ledger, Verifier& verifier,
                                Impersonation strategy, crypto::Rng& rng, const group::Scalar* stolen_sk = nullptr);

Session attack_mitm(Device& device, Verifier& verifier, const ledger::Ledger& ledger, const AuthInterceptor& mutate);

// Two devices authenticate at once; the adversary swaps their proofs in flight.
std::pair<AuthDecision, AuthDecision> attack_swap(Device& a, Device& b, Verifier& verifier,
                                                  const ledger::Ledger& ledger);

// Transaction whose TxSubmit is altered after signing.
Session attack_tamper(Device& device, Verifier& verifier, const Session& auth, ByteSpan payload,
                      const TxInterceptor& mutate);

// ---- suite -------------------------------------------------------------------

inline const std::set<std::string> kSuites = {"replay", "impersonate", "mitm", "tamper", "literal"};

struct SuiteOptions {
  std::set<std::string> suites = kSuites;
  std::uint64_t seed = 1;
  int replay_trials = 100;
  int forgery_trials = 1000;
  int mitm_flips = 1000;
  int tamper_trials = 100;
};

struct ScenarioResult {
  std::string suite;
  std::string name;
  Mode mode = Mode::Corrected;
  int trials = 0;
  int accepted = 0;
  // Security scenarios must reject every trial. Demonstrations (controls and
  // literal-mode defects) pass when every trial has the expected outcome.
  bool security = true;
  bool expect_accept = false;

  bool passed() const { return expect_accept ? accepted == trials : accepted == 0; }
};

std::vector<ScenarioResult> run_attack_suite(const SuiteOptions& options);

// True when every security scenario held.
bool defenses_hold(const std::vector<ScenarioResult>& results);

}  // namespace pufzk::protocol
