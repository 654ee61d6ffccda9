#pragma once

// A complete deployment in one object: CA, trust setup, ledger with the
// built-in chaincodes, and a verifier. Used by the CLI, the attack suite and
// the tests.

#include "pufzk/protocol/engine.hpp"

namespace pufzk::protocol {

struct TestbedOptions {
  std::uint64_t seed = 1;
  // Accept literal-mode proofs at the verifier and in the transaction
  // chaincode. Off by default: literal proofs are forgeable.
  bool literal = false;
  // Fixed trust-setup trapdoor; drawn at random when unset.
  std::optional<group::Scalar> alpha;
  double noise_ratio = puf::kDefaultNoiseRatio;
  std::size_t stages = puf::kDefaultStages;
  identity::EnrollmentParams enrollment;
};

class Testbed {
 public:
  explicit Testbed(const TestbedOptions& options = {});
  Testbed(const Testbed&) = delete;
  Testbed& operator=(const Testbed&) = delete;

  const TestbedOptions& options() const { return options_; }
  const zkp::TrustSetup& setup() const { return setup_; }
  const zkp::TrustSetup* literal() const { return &setup_; }
  identity::CertificateAuthority& ca() { return ca_; }
  ledger::Ledger& ledger() { return ledger_; }
  Verifier& verifier() { return verifier_; }
  chaincode::Config config() const;

  Device enroll(std::uint64_t puf_seed);
  Device enroll(const puf::PufDevice& puf);

  Session authenticate(Device& d, Mode mode, const AuthInterceptor& intercept = {});
  Session transact(Device& d, const Session& auth, ByteSpan payload, Mode mode, const TxInterceptor& intercept = {});

  crypto::Rng& rng() { return rng_; }

 private:
  TestbedOptions options_;
  crypto::Rng rng_;
  puf::NoiseRng noise_;
  identity::CertificateAuthority ca_;
  zkp::TrustSetup setup_;
  ledger::Ledger ledger_;
  Verifier verifier_;
};

}  // namespace pufzk::protocol
