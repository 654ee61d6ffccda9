#include "pufzk/chaincode/builtin.hpp"

#include <cstdio>

namespace pufzk::chaincode {

using identity::ActiveSubset;
using identity::DeviceRecord;
using ledger::ChaincodeResult;
using ledger::Rejection;
using ledger::TransactionRecord;
using ledger::WorldState;
using ledger::WriteSet;

namespace {
constexpr std::string_view kTxMessageContext = "PUFZK-V1/tx-signature";

std::shared_ptr<const DeviceRecord> load_device(const WorldState& s, const zkp::DeviceId& id) {
  const auto* entry = s.find(identity::device_key(id));
  if (!entry) return nullptr;
  return DeviceRecord::decode_cached(entry->value);
}
}  // namespace

Bytes tx_signing_message(const zkp::DeviceId& id, const zkp::Nonce& nonce, ByteSpan payload) {
  ByteWriter w;
  w.field(kTxMessageContext).raw(id).raw(nonce).field(payload);
  return std::move(w).take();
}

std::string tx_key(const zkp::DeviceId& id, const zkp::Nonce& nonce) { return "tx/" + to_hex(id) + "/" + to_hex(nonce); }

std::string consumed_key(const zkp::DeviceId& id, std::uint32_t round) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%010u", round);
  return "dev/" + to_hex(id) + "/consumed/" + buf;
}

ChaincodeResult register_device(const Config& cfg, const WorldState& s, const TransactionRecord& tx) {
  const auto decoded = DeviceRecord::decode_cached(tx.payload);
  const DeviceRecord& rec = *decoded;
  if (tx.submitter != rec.device_id) return Rejection{"submitter does not match record"};
  if (s.contains(identity::device_key(rec.device_id))) return Rejection{"duplicate device id"};
  if (s.contains(identity::hardware_key(rec.hardware_tag))) return Rejection{"hardware already registered"};
  if (rec.cert.device_id != rec.device_id || rec.cert.pk != rec.pk) return Rejection{"certificate does not match record"};
  if (rec.pk.is_identity()) return Rejection{"degenerate public key"};
  if (!identity::verify_certificate(cfg.ca_pk, rec.cert)) return Rejection{"certificate not signed by CA"};
  return WriteSet{
      {identity::device_key(rec.device_id), Bytes(tx.payload)},
      {identity::active_key(rec.device_id), ActiveSubset{}.encode()},
      {identity::hardware_key(rec.hardware_tag), Bytes(rec.device_id.begin(), rec.device_id.end())},
  };
}

ChaincodeResult rotate(const Config&, const WorldState& s, const TransactionRecord& tx) {
  const auto* rec_entry = s.find(identity::device_key(tx.submitter));
  if (!rec_entry) return Rejection{"unknown device"};
  const std::uint32_t subsets = DeviceRecord::peek_subset_count(rec_entry->value);
  const auto cur_bytes = s.get(identity::active_key(tx.submitter));
  if (!cur_bytes) return Rejection{"device has no active subset"};
  const ActiveSubset cur = ActiveSubset::decode(*cur_bytes);
  const ActiveSubset next = ActiveSubset::decode(tx.payload);
  if (next.round != cur.round + 1) return Rejection{"rotation must advance the round by one"};
  if (next.subset >= subsets) return Rejection{"subset index out of range"};
  if (subsets > 1 && next.subset == cur.subset) return Rejection{"rotation must change the subset"};
  ByteWriter consumed;
  consumed.u32(cur.subset);
  return WriteSet{
      {identity::active_key(tx.submitter), next.encode()},
      {consumed_key(tx.submitter, cur.round), std::move(consumed).take()},
  };
}

ChaincodeResult transact(const Config& cfg, const WorldState& s, const TransactionRecord& tx) {
  const auto rec = load_device(s, tx.submitter);
  if (!rec) return Rejection{"unknown device"};
  const std::string key = tx_key(tx.submitter, tx.nonce);
  if (s.contains(key)) return Rejection{"nonce already used"};

  if (!zkp::verify_sig_bytes(rec->pk, tx_signing_message(tx.submitter, tx.nonce, tx.payload), tx.signature))
    return Rejection{"invalid signature"};

  if (tx.proof.empty()) return Rejection{"missing proof"};
  bool proof_ok = false;
  switch (static_cast<zkp::Mode>(tx.proof[0])) {
    case zkp::Mode::Literal:
      if (!cfg.literal_setup_pk) return Rejection{"literal mode not configured"};
      proof_ok = zkp::verify_literal(*cfg.literal_setup_pk, zkp::SigmaProof::from_bytes(tx.proof));
      break;
    case zkp::Mode::Corrected: {
      const zkp::TxStatement st{tx.submitter, rec->pk, crypto::sha256(tx.payload), tx.nonce};
      proof_ok = zkp::tx_verify_corrected(st, zkp::CorrectedTxProof::from_bytes(tx.proof));
      break;
    }
    default:
      throw DecodeError("unknown proof mode tag");
  }
  if (!proof_ok) return Rejection{"invalid proof"};
  return WriteSet{{key, tx.payload}};
}

void install_builtin(ledger::Ledger& ledger, const Config& config) {
  ledger.register_chaincode(std::string(kRegister),
                            [config](const WorldState& s, const TransactionRecord& tx) { return register_device(config, s, tx); });
  ledger.register_chaincode(std::string(kRotate),
                            [config](const WorldState& s, const TransactionRecord& tx) { return rotate(config, s, tx); });
  ledger.register_chaincode(std::string(kTransact),
                            [config](const WorldState& s, const TransactionRecord& tx) { return transact(config, s, tx); });
}

identity::ActiveSubset rotate_challenges(ledger::Ledger& ledger, const zkp::DeviceId& id, crypto::Rng& rng) {
  const auto rec = ledger.get_state(identity::device_key(id));
  const auto cur = identity::active_subset(ledger, id);
  if (!rec || !cur) throw std::runtime_error("rotate_challenges: unknown device");
  const std::uint32_t subsets = DeviceRecord::peek_subset_count(*rec);
  ActiveSubset next{cur->round + 1, cur->subset};
  if (subsets > 1) {
    next.subset = static_cast<std::uint32_t>(rng.uniform(subsets - 1));
    if (next.subset >= cur->subset) ++next.subset;
  }
  TransactionRecord tx;
  tx.payload = next.encode();
  tx.submitter = id;
  const auto result = ledger.invoke(kRotate, std::move(tx));
  if (!result) throw std::runtime_error("rotate_challenges: " + result.reason);
  return next;
}

}  // namespace pufzk::chaincode
