#pragma once

// Built-in chaincodes: device registration, challenge rotation and
// transaction processing. Each is a pure function of (state, record).
//
// Transaction records: payload T, submitter id, signature over
// tx_signing_message(id, nonce, T), mode-tagged proof, nonce. Committed
// payloads are stored under tx/<id-hex>/<nonce-hex>; an existing key means
// the nonce was already used.

#include <optional>

#include "pufzk/identity/registry.hpp"

namespace pufzk::chaincode {

inline constexpr std::string_view kRegister = "register";
inline constexpr std::string_view kRotate = "rotate";
inline constexpr std::string_view kTransact = "transact";

struct Config {
  group::G2 ca_pk;
  // Global key of the literal-mode trust setup; literal proofs are refused
  // when absent.
  std::optional<group::G2> literal_setup_pk;
};

void install_builtin(ledger::Ledger& ledger, const Config& config);

ledger::ChaincodeResult register_device(const Config& cfg, const ledger::WorldState& s, const ledger::TransactionRecord& tx);
ledger::ChaincodeResult rotate(const Config& cfg, const ledger::WorldState& s, const ledger::TransactionRecord& tx);
ledger::ChaincodeResult transact(const Config& cfg, const ledger::WorldState& s, const ledger::TransactionRecord& tx);

Bytes tx_signing_message(const zkp::DeviceId& id, const zkp::Nonce& nonce, ByteSpan payload);
std::string tx_key(const zkp::DeviceId& id, const zkp::Nonce& nonce);
std::string consumed_key(const zkp::DeviceId& id, std::uint32_t round);

// Commits a rotation to a randomly chosen subset other than the current one
// and returns the new active subset. Throws std::runtime_error for an
// unknown device or a rejected rotation.
identity::ActiveSubset rotate_challenges(ledger::Ledger& ledger, const zkp::DeviceId& id, crypto::Rng& rng);

}  // namespace pufzk::chaincode
