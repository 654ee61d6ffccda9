#include "pufzk/protocol/testbed.hpp"

namespace pufzk::protocol {

namespace {
zkp::TrustSetup make_setup(const TestbedOptions& o, crypto::Rng& rng) {
  return o.alpha ? zkp::TrustSetup::with_alpha(*o.alpha) : zkp::TrustSetup::generate(rng);
}
}  // namespace

Testbed::Testbed(const TestbedOptions& options)
    : options_(options),
      rng_(crypto::Rng::from_seed(options.seed)),
      noise_(options.seed ^ 0x5eedULL),
      ca_(rng_),
      setup_(make_setup(options, rng_)),
      verifier_(ledger_, rng_.next_u64(), options.literal ? std::optional(setup_.pk) : std::nullopt) {
  chaincode::install_builtin(ledger_, config());
}

chaincode::Config Testbed::config() const {
  return {ca_.public_key(), options_.literal ? std::optional(setup_.pk) : std::nullopt};
}

Device Testbed::enroll(std::uint64_t puf_seed) { return enroll(puf::PufDevice(puf_seed, options_.noise_ratio, options_.stages)); }

Device Testbed::enroll(const puf::PufDevice& puf) {
  auto identity = identity::register_device(puf, ca_, ledger_, rng_, noise_, options_.enrollment);
  return Device(puf, std::move(identity), rng_.next_u64());
}

Session Testbed::authenticate(Device& d, Mode mode, const AuthInterceptor& intercept) {
  return run_authentication(d, verifier_, ledger_, mode, literal(), intercept);
}

Session Testbed::transact(Device& d, const Session& auth, ByteSpan payload, Mode mode, const TxInterceptor& intercept) {
  return run_transaction(d, verifier_, auth, payload, mode, literal(), intercept);
}

}  // namespace pufzk::protocol
