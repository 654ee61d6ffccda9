#include "pufzk/identity/registry.hpp"

#include <map>

#include "pufzk/chaincode/builtin.hpp"

namespace pufzk::identity {

namespace {
constexpr std::string_view kCertContext = "PUFZK-CERT-V1";
constexpr std::string_view kIdentityMagic = "PZKI";
constexpr std::uint32_t kIdentityVersion = 1;
}  // namespace

KeyPair KeyPair::generate(crypto::Rng& rng) {
  Scalar sk;
  do sk = Scalar::random(rng);
  while (sk.is_zero());
  return from_secret(sk);
}

KeyPair KeyPair::from_secret(const Scalar& sk) { return {sk, G2::generator() * sk}; }

// ---- certificates ----

Bytes Certificate::payload() const {
  ByteWriter w;
  w.field(kCertContext).u64(serial).raw(device_id).raw(pk.to_bytes()).field(role);
  return std::move(w).take();
}

Bytes Certificate::encode() const {
  ByteWriter w;
  w.u64(serial).raw(device_id).raw(pk.to_bytes()).field(role).raw(sig.to_bytes());
  return std::move(w).take();
}

Certificate Certificate::decode(ByteSpan data) {
  ByteReader r(data);
  Certificate c;
  c.serial = r.u64();
  c.device_id = r.fixed<32>();
  c.pk = G2::from_bytes(r.raw(G2::kEncodedSize));
  c.role = r.string_field();
  c.sig = zkp::Signature::from_bytes(r.raw(G1::kEncodedSize));
  r.expect_done();
  return c;
}

bool verify_certificate(const G2& ca_pk, const Certificate& cert) {
  return zkp::verify_sig(ca_pk, cert.payload(), cert.sig);
}

CertificateAuthority::CertificateAuthority(crypto::Rng& rng) : keys_(KeyPair::generate(rng)) {}

Certificate CertificateAuthority::issue(const DeviceId& id, const G2& pk, std::string role) {
  std::lock_guard lock(mu_);
  if (revoked_ids_.contains(id)) throw CaRefusal("device id is revoked");
  if (pk.is_identity()) throw CaRefusal("degenerate public key");
  Certificate c;
  c.serial = next_serial_++;
  c.device_id = id;
  c.pk = pk;
  c.role = std::move(role);
  c.sig = zkp::sign(keys_.sk, c.payload());
  return c;
}

void CertificateAuthority::revoke(std::uint64_t serial) {
  std::lock_guard lock(mu_);
  revoked_serials_.insert(serial);
}

void CertificateAuthority::revoke_device(const DeviceId& id) {
  std::lock_guard lock(mu_);
  revoked_ids_.insert(id);
}

bool CertificateAuthority::is_revoked(std::uint64_t serial) const {
  std::lock_guard lock(mu_);
  return revoked_serials_.contains(serial);
}

bool CertificateAuthority::verify(const Certificate& cert) const {
  {
    std::lock_guard lock(mu_);
    if (revoked_serials_.contains(cert.serial) || revoked_ids_.contains(cert.device_id)) return false;
  }
  return verify_certificate(keys_.pk, cert);
}

// ---- records ----

puf::ChallengeSet DeviceRecord::subset(std::uint32_t k) const {
  if (k >= subset_count()) throw std::out_of_range("no such challenge subset");
  const auto first = challenges.begin() + static_cast<std::ptrdiff_t>(k * subset_size);
  return {first, first + subset_size};
}

Bytes DeviceRecord::encode() const {
  ByteWriter w;
  w.raw(device_id).raw(pk.to_bytes()).field(puf::encode_challenges(challenges)).u32(subset_size);
  w.u32(static_cast<std::uint32_t>(commitments.size()));
  for (const auto& c : commitments) w.raw(c.to_bytes());
  w.field(cert.encode()).raw(hardware_tag);
  return std::move(w).take();
}

DeviceRecord DeviceRecord::decode(ByteSpan data) {
  ByteReader r(data);
  DeviceRecord d;
  d.device_id = r.fixed<32>();
  d.pk = G2::from_bytes(r.raw(G2::kEncodedSize));
  d.challenges = puf::decode_challenges(r.field());
  d.subset_size = r.u32();
  const std::uint32_t n = r.u32();
  if (d.subset_size == 0 || static_cast<std::uint64_t>(n) * d.subset_size != d.challenges.size())
    throw DecodeError("commitment count does not match challenge subsets");
  for (std::uint32_t i = 0; i < n; ++i) d.commitments.push_back(G1::from_bytes(r.raw(G1::kEncodedSize)));
  d.cert = Certificate::decode(r.field());
  d.hardware_tag = r.fixed<32>();
  r.expect_done();
  return d;
}

std::shared_ptr<const DeviceRecord> DeviceRecord::decode_cached(ByteSpan data) {
  static std::mutex mu;
  static std::map<crypto::Digest, std::shared_ptr<const DeviceRecord>> cache;
  constexpr std::size_t kMaxEntries = 4096;

  const crypto::Digest key = crypto::sha256(data);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rec = std::make_shared<const DeviceRecord>(decode(data));
  std::lock_guard lock(mu);
  if (cache.size() >= kMaxEntries) cache.clear();
  cache.emplace(key, rec);
  return rec;
}

std::uint32_t DeviceRecord::peek_subset_count(ByteSpan data) {
  ByteReader r(data);
  r.raw(32 + G2::kEncodedSize);
  r.field();
  r.u32();
  return r.u32();
}

Bytes ActiveSubset::encode() const {
  ByteWriter w;
  w.u32(round).u32(subset);
  return std::move(w).take();
}

ActiveSubset ActiveSubset::decode(ByteSpan data) {
  ByteReader r(data);
  ActiveSubset a;
  a.round = r.u32();
  a.subset = r.u32();
  r.expect_done();
  return a;
}

Bytes DeviceIdentity::export_bytes() const {
  ByteWriter w;
  w.raw(as_bytes(kIdentityMagic)).u32(kIdentityVersion).field(record.encode()).raw(sk.to_bytes());
  return std::move(w).take();
}

DeviceIdentity DeviceIdentity::import_bytes(ByteSpan data) {
  ByteReader r(data);
  const ByteSpan magic = r.raw(kIdentityMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kIdentityMagic.begin())) throw DecodeError("not an identity record");
  if (r.u32() != kIdentityVersion) throw DecodeError("unsupported identity version");
  DeviceIdentity id;
  id.record = DeviceRecord::decode(r.field());
  id.sk = Scalar::from_bytes(r.raw(Scalar::kEncodedSize));
  r.expect_done();
  if (G2::generator() * id.sk != id.record.pk) throw DecodeError("secret key does not match public key");
  return id;
}

// ---- enrollment ----

DeviceId compute_device_id(const G2& pk, const puf::ResponseSet& responses) {
  crypto::Sha256 h;
  h.update(pk.to_bytes());
  h.update(puf::pack_bits(responses));
  return h.finish();
}

Scalar response_scalar(std::uint32_t subset, const puf::ResponseSet& subset_responses) {
  ByteWriter w;
  w.u32(subset).u32(static_cast<std::uint32_t>(subset_responses.size())).raw(puf::pack_bits(subset_responses));
  return group::hash_to_scalar(w.bytes(), group::tags::kResponseScalar);
}

std::string device_key(const DeviceId& id) { return "dev/" + to_hex(id); }
std::string active_key(const DeviceId& id) { return "dev/" + to_hex(id) + "/active"; }
std::string hardware_key(const crypto::Digest& tag) { return "hw/" + to_hex(tag); }

DeviceIdentity register_device(const puf::PufDevice& puf, CertificateAuthority& ca, ledger::Ledger& ledger,
                               crypto::Rng& rng, puf::NoiseRng& noise, const EnrollmentParams& params) {
  if (params.subset_size == 0 || params.challenge_count % params.subset_size != 0)
    throw std::invalid_argument("challenge count must be a positive multiple of the subset size");
  const crypto::Digest tag = puf.hardware_tag();
  if (ledger.get_state(hardware_key(tag))) throw RegistrationError("device already registered");

  DeviceIdentity out;
  DeviceRecord& rec = out.record;
  rec.challenges = puf::select_stable_challenges(puf, rng, noise, params.challenge_count, params.stability_trials);
  const puf::ResponseSet responses = puf.respond(rec.challenges, params.enrollment_repetitions, noise);

  const KeyPair keys = KeyPair::generate(rng);
  out.sk = keys.sk;
  rec.pk = keys.pk;
  rec.device_id = compute_device_id(keys.pk, responses);
  rec.subset_size = static_cast<std::uint32_t>(params.subset_size);
  rec.hardware_tag = tag;
  const std::uint32_t subsets = static_cast<std::uint32_t>(params.challenge_count / params.subset_size);
  for (std::uint32_t k = 0; k < subsets; ++k) {
    const auto first = responses.begin() + static_cast<std::ptrdiff_t>(k * params.subset_size);
    const puf::ResponseSet part(first, first + static_cast<std::ptrdiff_t>(params.subset_size));
    rec.commitments.push_back(G1::generator() * response_scalar(k, part));
  }

  try {
    rec.cert = ca.issue(rec.device_id, rec.pk, params.role);
  } catch (const CaRefusal& e) {
    throw RegistrationError(std::string("CA refused: ") + e.what());
  }

  ledger::TransactionRecord tx;
  tx.payload = rec.encode();
  tx.submitter = rec.device_id;
  const auto result = ledger.invoke(chaincode::kRegister, std::move(tx));
  if (!result) {
    ca.revoke(rec.cert.serial);
    throw RegistrationError("registration rejected: " + result.reason);
  }
  return out;
}

std::optional<DeviceRecord> query_identity(const ledger::Ledger& ledger, const DeviceId& id) {
  const auto bytes = ledger.get_state(device_key(id));
  if (!bytes) return std::nullopt;
  return *DeviceRecord::decode_cached(*bytes);
}

std::optional<ActiveSubset> active_subset(const ledger::Ledger& ledger, const DeviceId& id) {
  const auto bytes = ledger.get_state(active_key(id));
  if (!bytes) return std::nullopt;
  return ActiveSubset::decode(*bytes);
}

}  // namespace pufzk::identity
