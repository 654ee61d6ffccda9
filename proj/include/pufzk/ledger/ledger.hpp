#pragma once

// Append-only hash-chained ledger with a keyed world state.
//
// Each committed transaction produces one block:
//   Block{height, prev_hash, tx_digests, state_digest} plus the transaction
//   record and the write-set it produced.
// The state digest is SHA-256 over "pufzk/state/v2" and the per-entry leaf
// hashes of (key, value, version), in key order.
// Chaincodes are pure functions of (committed state, transaction) returning a
// write-set or a rejection; nothing else can modify the state.
//
// Commits are totally ordered through a single writer lock. Readers take a
// shared lock and only ever observe committed state.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include "pufzk/common/bytes.hpp"
#include "pufzk/crypto/sha256.hpp"

namespace pufzk::ledger {

using crypto::Digest;

struct Write {
  std::string key;
  Bytes value;
  friend bool operator==(const Write&, const Write&) = default;
};
using WriteSet = std::vector<Write>;

struct StateEntry {
  Bytes value;
  std::uint64_t version = 0;
  Digest leaf{};  // SHA-256(field(key) || field(value) || u64 version)
};

class WorldState {
 public:
  const StateEntry* find(std::string_view key) const;
  std::optional<Bytes> get(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }
  // Keys in [prefix, prefix + 0xff...), in order.
  std::vector<std::string> keys_with_prefix(std::string_view prefix) const;
  void apply(const WriteSet& writes);
  Digest digest() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, StateEntry, std::less<>> entries_;
};

struct TransactionRecord {
  std::string chaincode;
  Bytes payload;
  Digest submitter{};  // device id, zero for system transactions
  Bytes signature;
  Bytes proof;  // mode-tagged proof encoding, may be empty
  std::array<std::uint8_t, 16> nonce{};

  Bytes encode() const;
  static TransactionRecord decode(ByteSpan data);
  Digest digest() const { return crypto::sha256(encode()); }
  friend bool operator==(const TransactionRecord&, const TransactionRecord&) = default;
};

struct Block {
  std::uint64_t height = 0;
  Digest prev_hash{};
  std::vector<Digest> tx_digests;
  Digest state_digest{};
  std::vector<TransactionRecord> transactions;
  std::vector<WriteSet> write_sets;

  Bytes header_bytes() const;
  Digest hash() const { return crypto::sha256(header_bytes()); }
  Bytes encode() const;
  static Block decode(ByteSpan data);
};

struct Rejection {
  std::string reason;
};
using ChaincodeResult = std::variant<WriteSet, Rejection>;
using Chaincode = std::function<ChaincodeResult(const WorldState&, const TransactionRecord&)>;

enum class CommitStatus { Committed, Rejected, UnknownChaincode, Malformed };
const char* status_name(CommitStatus s);

struct CommitResult {
  CommitStatus status = CommitStatus::Rejected;
  std::string reason;
  std::uint64_t height = 0;  // height of the new block when committed

  bool committed() const { return status == CommitStatus::Committed; }
  explicit operator bool() const { return committed(); }
};

class Ledger {
 public:
  Ledger();
  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;

  void register_chaincode(std::string name, Chaincode fn);
  bool has_chaincode(std::string_view name) const;

  // Runs the named chaincode against the committed state; on success applies
  // its write-set and appends a block. A rejection leaves everything unchanged.
  CommitResult invoke(std::string_view chaincode, TransactionRecord tx);

  std::optional<Bytes> get_state(std::string_view key) const;
  std::vector<std::string> keys_with_prefix(std::string_view prefix) const;
  Digest state_digest() const;
  std::uint64_t height() const;  // height of the last block; genesis is 0
  std::vector<Block> blocks() const;
  Block block(std::uint64_t height) const;

  // Checks heights, hash links, transaction digests and every block's state
  // digest by replaying the stored write-sets from an empty state. A prefix of
  // a valid chain is itself valid; callers compare height() to detect
  // truncation.
  bool verify_chain() const;

  // Length-prefixed binary log: "PZKL" || u32 version || u64 count || blocks.
  Bytes export_log() const;
  // Decodes without validation; run verify_chain() afterwards.
  static std::unique_ptr<Ledger> import_log(ByteSpan data);

  // Re-executes every committed transaction through this ledger's chaincodes.
  // This ledger must be fresh. Returns false if any transaction is rejected.
  bool replay(const std::vector<Block>& blocks);

  // Calls fn with a consistent snapshot of the committed state.
  template <class Fn>
  auto with_state(Fn&& fn) const {
    std::shared_lock lock(mu_);
    return fn(state_);
  }

 private:
  static Block genesis();

  mutable std::shared_mutex mu_;
  std::map<std::string, Chaincode, std::less<>> chaincodes_;
  WorldState state_;
  std::vector<Block> blocks_;
};

}  // namespace pufzk::ledger
