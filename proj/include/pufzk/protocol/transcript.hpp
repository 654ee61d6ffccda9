#pragma once

// Audit transcripts. Line-delimited text:
//
//   # pufzk-transcript v1
//   config <ca_pk hex> <literal setup pk hex | ->
//   msg <session> <d2v|v2d> <encoded message hex>
//   ...
//   ledger <exported ledger log hex>
//
// Other lines starting with '#' and blank lines are ignored.

#include "pufzk/protocol/engine.hpp"

namespace pufzk::protocol {

inline constexpr std::string_view kTranscriptHeader = "# pufzk-transcript v1";

std::string write_transcript(const std::vector<Session>& sessions, const ledger::Ledger& ledger,
                             const chaincode::Config& config);

struct AuditReport {
  bool ok = false;
  std::size_t messages = 0;
  std::size_t sessions = 0;
  std::size_t blocks = 0;
  std::size_t auth_accepted = 0;
  std::size_t auth_rejected = 0;
  std::size_t tx_committed = 0;
  std::size_t tx_rejected = 0;
  crypto::Digest state_digest{};
  std::vector<std::string> errors;
};

// Checks that every message decodes and re-encodes byte-identically, that
// each session follows offer -> request -> decision -> (submit -> decision)*,
// that the ledger log verifies, that re-executing it through the built-in
// chaincodes reproduces the same state, that every accepted proof verifies
// against the round it was made for, that decision flags agree with their
// reasons, and that every committed TxDecision points at a block holding the
// submitted record.
AuditReport audit_transcript(std::string_view text);

}  // namespace pufzk::protocol
