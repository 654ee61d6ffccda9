#pragma once

// Device enrollment and a minimal certificate authority.
//
// On-ledger layout written by the registration chaincode:
//   dev/<id-hex>          DeviceRecord
//   dev/<id-hex>/active   ActiveSubset (round, subset)
//   hw/<tag-hex>          device id registered for a hardware tag

#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>

#include "pufzk/ledger/ledger.hpp"
#include "pufzk/puf/puf.hpp"
#include "pufzk/zkp/proofs.hpp"

namespace pufzk::identity {

using group::G1;
using group::G2;
using group::Scalar;
using zkp::DeviceId;

struct KeyPair {
  Scalar sk;
  G2 pk;

  static KeyPair generate(crypto::Rng& rng);
  static KeyPair from_secret(const Scalar& sk);
};

struct Certificate {
  std::uint64_t serial = 0;
  DeviceId device_id{};
  G2 pk;
  std::string role;
  zkp::Signature sig;

  // The signed bytes: "PUFZK-CERT-V1" || serial || device_id || pk || role.
  Bytes payload() const;
  Bytes encode() const;
  static Certificate decode(ByteSpan data);
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

// Signature check only; revocation is tracked by the issuing CA.
bool verify_certificate(const G2& ca_pk, const Certificate& cert);

class CaRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thread-safe; issuance and revocation are serialized internally.
class CertificateAuthority {
 public:
  explicit CertificateAuthority(crypto::Rng& rng);
  explicit CertificateAuthority(const KeyPair& keys) : keys_(keys) {}

  const G2& public_key() const { return keys_.pk; }
  // Throws CaRefusal if the device id has been revoked.
  Certificate issue(const DeviceId& id, const G2& pk, std::string role);
  void revoke(std::uint64_t serial);
  void revoke_device(const DeviceId& id);
  bool is_revoked(std::uint64_t serial) const;
  // Valid signature by this CA and not revoked.
  bool verify(const Certificate& cert) const;

 private:
  KeyPair keys_;
  mutable std::mutex mu_;
  std::uint64_t next_serial_ = 1;
  std::set<std::uint64_t> revoked_serials_;
  std::set<DeviceId> revoked_ids_;
};

struct DeviceRecord {
  DeviceId device_id{};
  G2 pk;
  puf::ChallengeSet challenges;
  std::uint32_t subset_size = 0;
  std::vector<G1> commitments;  // W_k, one per challenge subset
  Certificate cert;
  crypto::Digest hardware_tag{};

  std::uint32_t subset_count() const { return static_cast<std::uint32_t>(commitments.size()); }
  puf::ChallengeSet subset(std::uint32_t k) const;

  Bytes encode() const;
  // Throws DecodeError, including for any off-subgroup point.
  static DeviceRecord decode(ByteSpan data);
  // Memoized decode keyed by the SHA-256 of the bytes. Records are written
  // once at registration, so repeated lookups skip the point checks.
  static std::shared_ptr<const DeviceRecord> decode_cached(ByteSpan data);
  // Number of subsets, read from the header without decoding any point.
  static std::uint32_t peek_subset_count(ByteSpan data);
};

// The challenge subset a device must answer next. `round` counts completed
// rotations and is bound into every authentication proof.
struct ActiveSubset {
  std::uint32_t round = 0;
  std::uint32_t subset = 0;

  Bytes encode() const;
  static ActiveSubset decode(ByteSpan data);
  friend bool operator==(const ActiveSubset&, const ActiveSubset&) = default;
};

struct EnrollmentParams {
  std::size_t challenge_count = puf::kDefaultChallengeCount;
  std::size_t subset_size = 64;
  int enrollment_repetitions = puf::kEnrollmentRepetitions;
  int stability_trials = 64;
  std::string role = "device";
};

// Device-side identity: the public record plus the secret key.
struct DeviceIdentity {
  DeviceRecord record;
  Scalar sk;

  const DeviceId& id() const { return record.device_id; }
  // Versioned binary record: "PZKI" || u32 version || record || sk.
  Bytes export_bytes() const;
  static DeviceIdentity import_bytes(ByteSpan data);
};

class RegistrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DeviceId compute_device_id(const G2& pk, const puf::ResponseSet& responses);
// rho_k = H(k || packed R_k), the exponent committed in W_k.
Scalar response_scalar(std::uint32_t subset, const puf::ResponseSet& subset_responses);

// Enrollment: stable challenges, reference responses, key pair, device id,
// CA certificate, then the registration transaction. All-or-nothing: if the
// ledger rejects the record the certificate is revoked.
DeviceIdentity register_device(const puf::PufDevice& puf, CertificateAuthority& ca, ledger::Ledger& ledger,
                               crypto::Rng& rng, puf::NoiseRng& noise, const EnrollmentParams& params = {});

std::string device_key(const DeviceId& id);
std::string active_key(const DeviceId& id);
std::string hardware_key(const crypto::Digest& tag);

std::optional<DeviceRecord> query_identity(const ledger::Ledger& ledger, const DeviceId& id);
std::optional<ActiveSubset> active_subset(const ledger::Ledger& ledger, const DeviceId& id);

}  // namespace pufzk::identity
