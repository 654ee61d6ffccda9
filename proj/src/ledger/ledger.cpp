#include "pufzk/ledger/ledger.hpp"

#include <mutex>

namespace pufzk::ledger {

namespace {
constexpr std::string_view kLogMagic = "PZKL";
constexpr std::uint32_t kLogVersion = 1;

void encode_writes(ByteWriter& w, const WriteSet& ws) {
  w.u32(static_cast<std::uint32_t>(ws.size()));
  for (const auto& wr : ws) w.field(wr.key).field(wr.value);
}

}  // namespace

// ---- WorldState ----

const StateEntry* WorldState::find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<Bytes> WorldState::get(std::string_view key) const {
  const StateEntry* e = find(key);
  if (!e) return std::nullopt;
  return e->value;
}

std::vector<std::string> WorldState::keys_with_prefix(std::string_view prefix) const {
  std::vector<std::string> out;
  for (auto it = entries_.lower_bound(prefix); it != entries_.end() && it->first.starts_with(prefix); ++it)
    out.push_back(it->first);
  return out;
}

void WorldState::apply(const WriteSet& writes) {
  for (const auto& w : writes) {
    auto& e = entries_[w.key];
    e.value = w.value;
    ++e.version;
    ByteWriter leaf;
    leaf.field(w.key).field(e.value).u64(e.version);
    e.leaf = crypto::sha256(leaf.bytes());
  }
}

Digest WorldState::digest() const {
  crypto::Sha256 h;
  h.update(as_bytes("pufzk/state/v2"));
  for (const auto& [key, e] : entries_) h.update(e.leaf);
  return h.finish();
}

// ---- TransactionRecord ----

Bytes TransactionRecord::encode() const {
  ByteWriter w;
  w.field(chaincode).field(payload).raw(submitter).field(signature).field(proof).raw(nonce);
  return std::move(w).take();
}

TransactionRecord TransactionRecord::decode(ByteSpan data) {
  ByteReader r(data);
  TransactionRecord tx;
  tx.chaincode = r.string_field();
  const ByteSpan payload = r.field();
  tx.payload.assign(payload.begin(), payload.end());
  tx.submitter = r.fixed<32>();
  const ByteSpan sig = r.field();
  tx.signature.assign(sig.begin(), sig.end());
  const ByteSpan proof = r.field();
  tx.proof.assign(proof.begin(), proof.end());
  tx.nonce = r.fixed<16>();
  r.expect_done();
  return tx;
}

// ---- Block ----

Bytes Block::header_bytes() const {
  ByteWriter w;
  w.raw(as_bytes("pufzk/block/v1")).u64(height).raw(prev_hash).u32(static_cast<std::uint32_t>(tx_digests.size()));
  for (const auto& d : tx_digests) w.raw(d);
  w.raw(state_digest);
  return std::move(w).take();
}

Bytes Block::encode() const {
  ByteWriter w;
  w.u64(height).raw(prev_hash).u32(static_cast<std::uint32_t>(tx_digests.size()));
  for (const auto& d : tx_digests) w.raw(d);
  w.raw(state_digest).u32(static_cast<std::uint32_t>(transactions.size()));
  for (const auto& tx : transactions) w.field(tx.encode());
  w.u32(static_cast<std::uint32_t>(write_sets.size()));
  for (const auto& ws : write_sets) encode_writes(w, ws);
  return std::move(w).take();
}

Block Block::decode(ByteSpan data) {
  ByteReader r(data);
  Block b;
  b.height = r.u64();
  b.prev_hash = r.fixed<32>();
  const std::uint32_t n_digests = r.u32();
  if (n_digests > r.remaining() / 32) throw DecodeError("digest count too large");
  for (std::uint32_t i = 0; i < n_digests; ++i) b.tx_digests.push_back(r.fixed<32>());
  b.state_digest = r.fixed<32>();
  const std::uint32_t n_tx = r.u32();
  if (n_tx > r.remaining()) throw DecodeError("transaction count too large");
  for (std::uint32_t i = 0; i < n_tx; ++i) b.transactions.push_back(TransactionRecord::decode(r.field()));
  const std::uint32_t n_ws = r.u32();
  if (n_ws > r.remaining()) throw DecodeError("write-set count too large");
  for (std::uint32_t i = 0; i < n_ws; ++i) {
    const std::uint32_t n = r.u32();
    if (n > r.remaining()) throw DecodeError("write count too large");
    WriteSet ws;
    for (std::uint32_t j = 0; j < n; ++j) {
      Write wr;
      wr.key = r.string_field();
      const ByteSpan v = r.field();
      wr.value.assign(v.begin(), v.end());
      ws.push_back(std::move(wr));
    }
    b.write_sets.push_back(std::move(ws));
  }
  r.expect_done();
  return b;
}

// ---- Ledger ----

const char* status_name(CommitStatus s) {
  switch (s) {
    case CommitStatus::Committed: return "committed";
    case CommitStatus::Rejected: return "rejected";
    case CommitStatus::UnknownChaincode: return "unknown-chaincode";
    case CommitStatus::Malformed: return "malformed";
  }
  return "?";
}

Block Ledger::genesis() {
  Block g;
  g.state_digest = WorldState().digest();
  return g;
}

Ledger::Ledger() { blocks_.push_back(genesis()); }

void Ledger::register_chaincode(std::string name, Chaincode fn) {
  std::unique_lock lock(mu_);
  chaincodes_[std::move(name)] = std::move(fn);
}

bool Ledger::has_chaincode(std::string_view name) const {
  std::shared_lock lock(mu_);
  return chaincodes_.contains(name);
}

CommitResult Ledger::invoke(std::string_view chaincode, TransactionRecord tx) {
  tx.chaincode = std::string(chaincode);
  std::unique_lock lock(mu_);
  auto it = chaincodes_.find(chaincode);
  if (it == chaincodes_.end()) return {CommitStatus::UnknownChaincode, "no chaincode named " + tx.chaincode, 0};

  ChaincodeResult result;
  try {
    result = it->second(state_, tx);
  } catch (const DecodeError& e) {
    return {CommitStatus::Malformed, e.what(), 0};
  }
  if (auto* rej = std::get_if<Rejection>(&result)) return {CommitStatus::Rejected, rej->reason, 0};

  auto& writes = std::get<WriteSet>(result);
  state_.apply(writes);
  Block b;
  b.height = blocks_.back().height + 1;
  b.prev_hash = blocks_.back().hash();
  b.tx_digests.push_back(tx.digest());
  b.state_digest = state_.digest();
  b.transactions.push_back(std::move(tx));
  b.write_sets.push_back(std::move(writes));
  blocks_.push_back(std::move(b));
  return {CommitStatus::Committed, {}, blocks_.back().height};
}

std::optional<Bytes> Ledger::get_state(std::string_view key) const {
  std::shared_lock lock(mu_);
  return state_.get(key);
}

std::vector<std::string> Ledger::keys_with_prefix(std::string_view prefix) const {
  std::shared_lock lock(mu_);
  return state_.keys_with_prefix(prefix);
}

Digest Ledger::state_digest() const {
  std::shared_lock lock(mu_);
  return state_.digest();
}

std::uint64_t Ledger::height() const {
  std::shared_lock lock(mu_);
  return blocks_.back().height;
}

std::vector<Block> Ledger::blocks() const {
  std::shared_lock lock(mu_);
  return blocks_;
}

Block Ledger::block(std::uint64_t height) const {
  std::shared_lock lock(mu_);
  if (height >= blocks_.size()) throw std::out_of_range("no block at that height");
  return blocks_[height];
}

bool Ledger::verify_chain() const {
  std::shared_lock lock(mu_);
  if (blocks_.empty()) return false;
  const Block g = genesis();
  const Block& first = blocks_.front();
  if (first.height != 0 || first.prev_hash != g.prev_hash || !first.tx_digests.empty() ||
      !first.transactions.empty() || !first.write_sets.empty() || first.state_digest != g.state_digest)
    return false;

  WorldState replayed;
  for (std::size_t i = 1; i < blocks_.size(); ++i) {
    const Block& b = blocks_[i];
    if (b.height != i || b.prev_hash != blocks_[i - 1].hash()) return false;
    if (b.transactions.size() != b.tx_digests.size() || b.write_sets.size() != b.transactions.size()) return false;
    for (std::size_t t = 0; t < b.transactions.size(); ++t) {
      if (b.transactions[t].digest() != b.tx_digests[t]) return false;
      replayed.apply(b.write_sets[t]);
    }
    if (replayed.digest() != b.state_digest) return false;
  }
  return replayed.digest() == state_.digest();
}

Bytes Ledger::export_log() const {
  std::shared_lock lock(mu_);
  ByteWriter w;
  w.raw(as_bytes(kLogMagic)).u32(kLogVersion).u64(blocks_.size());
  for (const auto& b : blocks_) w.field(b.encode());
  return std::move(w).take();
}

std::unique_ptr<Ledger> Ledger::import_log(ByteSpan data) {
  ByteReader r(data);
  if (!std::equal(kLogMagic.begin(), kLogMagic.end(), r.raw(kLogMagic.size()).begin()))
    throw DecodeError("not a ledger log");
  if (r.u32() != kLogVersion) throw DecodeError("unsupported ledger log version");
  const std::uint64_t count = r.u64();
  if (count == 0 || count > r.remaining()) throw DecodeError("bad block count");
  auto out = std::make_unique<Ledger>();
  out->blocks_.clear();
  for (std::uint64_t i = 0; i < count; ++i) out->blocks_.push_back(Block::decode(r.field()));
  r.expect_done();
  for (const auto& b : out->blocks_)
    for (const auto& ws : b.write_sets) out->state_.apply(ws);
  return out;
}

bool Ledger::replay(const std::vector<Block>& blocks) {
  for (std::size_t i = 1; i < blocks.size(); ++i)
    for (const auto& tx : blocks[i].transactions)
      if (!invoke(tx.chaincode, tx)) return false;
  return true;
}

}  // namespace pufzk::ledger
