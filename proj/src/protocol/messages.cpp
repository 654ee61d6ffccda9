#include "pufzk/protocol/messages.hpp"

namespace pufzk::protocol {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

Bytes u64_bytes(std::uint64_t v) {
  ByteWriter w;
  w.u64(v);
  return std::move(w).take();
}

std::uint64_t read_u64(ByteSpan f) {
  if (f.size() != 8) throw DecodeError("expected 8-byte integer field");
  ByteReader r(f);
  return r.u64();
}

bool read_flag(ByteSpan f) {
  if (f.size() != 1 || f[0] > 1) throw DecodeError("expected boolean field");
  return f[0] == 1;
}

std::string read_text(ByteSpan f) { return {f.begin(), f.end()}; }

}  // namespace

MessageTag tag_of(const Message& m) {
  static constexpr MessageTag tags[] = {MessageTag::AuthRequest, MessageTag::AuthDecision, MessageTag::TxSubmit,
                                        MessageTag::TxDecision, MessageTag::NonceOffer};
  return tags[m.index()];
}

const char* tag_name(MessageTag t) {
  switch (t) {
    case MessageTag::AuthRequest: return "AuthRequest";
    case MessageTag::AuthDecision: return "AuthDecision";
    case MessageTag::TxSubmit: return "TxSubmit";
    case MessageTag::TxDecision: return "TxDecision";
    case MessageTag::NonceOffer: return "NonceOffer";
  }
  return "?";
}

SessionId session_of(const Message& m) {
  return std::visit([](const auto& x) { return x.session; }, m);
}

Bytes encode_message(const Message& m) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(tag_of(m)));
  w.field(u64_bytes(session_of(m)));
  std::visit(overloaded{
                 [&](const AuthRequest& x) { w.field(x.device_id).field(x.proof).field(x.nonce); },
                 [&](const AuthDecision& x) {
                   w.field(Bytes{static_cast<std::uint8_t>(x.accept)}).field(std::string_view(x.reason));
                 },
                 [&](const TxSubmit& x) { w.field(x.record.encode()); },
                 [&](const TxDecision& x) {
                   w.field(Bytes{static_cast<std::uint8_t>(x.accept)})
                       .field(std::string_view(x.reason))
                       .field(u64_bytes(x.height));
                 },
                 [&](const NonceOffer& x) { w.field(x.nonce); },
             },
             m);
  return std::move(w).take();
}

Message decode_message(ByteSpan data) {
  ByteReader r(data);
  const auto tag = static_cast<MessageTag>(r.u8());
  const SessionId session = read_u64(r.field());
  Message out;
  switch (tag) {
    case MessageTag::AuthRequest: {
      AuthRequest x;
      x.session = session;
      x.device_id = to_array<32>(r.field());
      const ByteSpan proof = r.field();
      x.proof.assign(proof.begin(), proof.end());
      x.nonce = to_array<16>(r.field());
      out = std::move(x);
      break;
    }
    case MessageTag::AuthDecision: {
      AuthDecision x;
      x.session = session;
      x.accept = read_flag(r.field());
      x.reason = read_text(r.field());
      out = std::move(x);
      break;
    }
    case MessageTag::TxSubmit:
      out = TxSubmit{session, ledger::TransactionRecord::decode(r.field())};
      break;
    case MessageTag::TxDecision: {
      TxDecision x;
      x.session = session;
      x.accept = read_flag(r.field());
      x.reason = read_text(r.field());
      x.height = read_u64(r.field());
      out = std::move(x);
      break;
    }
    case MessageTag::NonceOffer:
      out = NonceOffer{session, to_array<16>(r.field())};
      break;
    default:
      throw DecodeError("unknown message tag");
  }
  r.expect_done();
  return out;
}

}  // namespace pufzk::protocol
