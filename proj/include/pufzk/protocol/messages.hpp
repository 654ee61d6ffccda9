#pragma once

// Messages exchanged between device actors and the verifier.
//
// Wire format: one tag byte, then each field as u32 big-endian length || bytes.
//   0x01 AuthRequest   session u64 | device_id 32 | proof | nonce 16
//   0x02 AuthDecision  session u64 | accept u8 | reason utf-8
//   0x03 TxSubmit      session u64 | TransactionRecord
//   0x04 TxDecision    session u64 | accept u8 | reason utf-8 | height u64
//   0x05 NonceOffer    session u64 | nonce 16
// Integers inside fields are big-endian. Decoding is strict: unknown tags,
// wrong field widths and trailing bytes are DecodeErrors.

#include <variant>

#include "pufzk/ledger/ledger.hpp"
#include "pufzk/zkp/proofs.hpp"

namespace pufzk::protocol {

using SessionId = std::uint64_t;

enum class MessageTag : std::uint8_t {
  AuthRequest = 0x01,
  AuthDecision = 0x02,
  TxSubmit = 0x03,
  TxDecision = 0x04,
  NonceOffer = 0x05,
};

struct NonceOffer {
  SessionId session = 0;
  zkp::Nonce nonce{};
  friend bool operator==(const NonceOffer&, const NonceOffer&) = default;
};

struct AuthRequest {
  SessionId session = 0;
  zkp::DeviceId device_id{};
  Bytes proof;
  zkp::Nonce nonce{};
  friend bool operator==(const AuthRequest&, const AuthRequest&) = default;
};

struct AuthDecision {
  SessionId session = 0;
  bool accept = false;
  std::string reason;
  friend bool operator==(const AuthDecision&, const AuthDecision&) = default;
};

struct TxSubmit {
  SessionId session = 0;
  ledger::TransactionRecord record;
  friend bool operator==(const TxSubmit&, const TxSubmit&) = default;
};

struct TxDecision {
  SessionId session = 0;
  bool accept = false;
  std::string reason;
  std::uint64_t height = 0;
  friend bool operator==(const TxDecision&, const TxDecision&) = default;
};

using Message = std::variant<AuthRequest, AuthDecision, TxSubmit, TxDecision, NonceOffer>;

MessageTag tag_of(const Message& m);
const char* tag_name(MessageTag t);
SessionId session_of(const Message& m);
Bytes encode_message(const Message& m);
Message decode_message(ByteSpan data);

}  // namespace pufzk::protocol
