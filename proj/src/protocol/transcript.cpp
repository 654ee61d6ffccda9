#include "pufzk/protocol/transcript.hpp"

#include <sstream>

namespace pufzk::protocol {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const std::size_t j = line.find(' ', i);
    const std::size_t end = j == std::string_view::npos ? line.size() : j;
    if (end > i) out.push_back(line.substr(i, end - i));
    i = end + 1;
  }
  return out;
}

bool expected_direction(MessageTag t, Direction d) {
  const bool from_device = t == MessageTag::AuthRequest || t == MessageTag::TxSubmit;
  return from_device == (d == Direction::ToVerifier);
}

struct SessionCheck {
  enum class Stage { Start, Offered, Requested, Authenticated, Submitted, Closed } stage = Stage::Start;
  zkp::Nonce nonce{};
  std::optional<AuthRequest> request;
  std::optional<ledger::TransactionRecord> pending_tx;
};

// An accepted proof must verify for one of the rounds the device has since
// rotated away from; consumed/<round> records which subset that round used.
bool accepted_proof_verifies(const AuthRequest& req, const ledger::Ledger& log, const chaincode::Config& config) {
  try {
    if (req.proof.empty()) return false;
    if (req.proof[0] == static_cast<std::uint8_t>(Mode::Literal))
      return config.literal_setup_pk && zkp::verify_literal(*config.literal_setup_pk, zkp::SigmaProof::from_bytes(req.proof));
    const auto rec = identity::query_identity(log, req.device_id);
    if (!rec) return false;
    const auto proof = zkp::CorrectedAuthProof::from_bytes(req.proof);
    const std::string prefix = chaincode::consumed_key(req.device_id, 0).substr(0, 4 + 64 + 10);
    for (const auto& key : log.keys_with_prefix(prefix)) {
      const auto round = static_cast<std::uint32_t>(std::stoul(key.substr(prefix.size())));
      const Bytes value = log.get_state(key).value_or(Bytes{});
      ByteReader r(value);
      const std::uint32_t subset = r.u32();
      if (subset >= rec->subset_count()) continue;
      const zkp::AuthStatement st{req.device_id, rec->pk, rec->commitments[subset], round, req.nonce};
      if (proof.challenge != zkp::auth_challenge(st, proof.commit_sk, proof.commit_puf)) continue;
      return zkp::auth_verify_corrected(st, proof);
    }
  } catch (const std::exception&) {
  }
  return false;
}

}  // namespace

std::string write_transcript(const std::vector<Session>& sessions, const ledger::Ledger& ledger,
                             const chaincode::Config& config) {
  std::ostringstream out;
  out << kTranscriptHeader << '\n';
  out << "config " << to_hex(config.ca_pk.to_bytes()) << ' '
      << (config.literal_setup_pk ? to_hex(config.literal_setup_pk->to_bytes()) : "-") << '\n';
  for (const auto& s : sessions)
    for (const auto& e : s.transcript) out << "msg " << s.id << ' ' << direction_name(e.dir) << ' ' << to_hex(e.message) << '\n';
  out << "ledger " << to_hex(ledger.export_log()) << '\n';
  return out.str();
}

AuditReport audit_transcript(std::string_view text) {
  AuditReport rep;
  auto fail = [&](std::string msg) { rep.errors.push_back(std::move(msg)); };

  std::vector<std::string_view> lines;
  for (std::size_t i = 0; i < text.size();) {
    const std::size_t j = text.find('\n', i);
    const std::size_t end = j == std::string_view::npos ? text.size() : j;
    lines.push_back(text.substr(i, end - i));
    i = end + 1;
  }
  if (lines.empty() || lines.front() != kTranscriptHeader) {
    fail("missing or unsupported transcript header");
    return rep;
  }

  std::optional<chaincode::Config> config;
  std::unique_ptr<ledger::Ledger> log;
  std::map<SessionId, SessionCheck> sessions;
  std::vector<std::pair<TxDecision, ledger::TransactionRecord>> commits;
  std::vector<AuthRequest> accepted;

  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::string where = "line " + std::to_string(n + 1) + ": ";
    const std::string_view line = lines[n];
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line);
    if (f.empty()) continue;
    try {
      if (f[0] == "config" && f.size() == 3) {
        chaincode::Config c{group::G2::from_bytes(from_hex(f[1])), std::nullopt};
        if (f[2] != "-") c.literal_setup_pk = group::G2::from_bytes(from_hex(f[2]));
        config = c;
      } else if (f[0] == "ledger" && f.size() == 2) {
        log = ledger::Ledger::import_log(from_hex(f[1]));
      } else if (f[0] == "msg" && f.size() == 4) {
        ++rep.messages;
        const SessionId sid = std::stoull(std::string(f[1]));
        const Direction dir = f[2] == "d2v" ? Direction::ToVerifier : Direction::ToDevice;
        if (f[2] != "d2v" && f[2] != "v2d") throw std::invalid_argument("bad direction");
        const Bytes raw = from_hex(f[3]);
        const Message m = decode_message(raw);
        if (encode_message(m) != raw) fail(where + "message does not re-encode identically");
        if (session_of(m) != sid) fail(where + "session id differs from message");
        if (!expected_direction(tag_of(m), dir)) fail(where + "message sent in the wrong direction");

        auto& s = sessions[sid];
        using Stage = SessionCheck::Stage;
        const auto bad_order = [&] { fail(where + std::string(tag_name(tag_of(m))) + " out of order"); };
        if (const auto* o = std::get_if<NonceOffer>(&m)) {
          if (s.stage != Stage::Start) bad_order();
          s.nonce = o->nonce;
          s.stage = Stage::Offered;
        } else if (const auto* r = std::get_if<AuthRequest>(&m)) {
          if (s.stage != Stage::Offered) bad_order();
          if (r->nonce != s.nonce) fail(where + "request nonce differs from the offered one");
          s.request = *r;
          s.stage = Stage::Requested;
        } else if (const auto* d = std::get_if<AuthDecision>(&m)) {
          if (s.stage != Stage::Requested) bad_order();
          d->accept ? ++rep.auth_accepted : ++rep.auth_rejected;
          if (d->accept != (d->reason == "accepted")) fail(where + "decision flag and reason disagree");
          if (d->accept && s.request) accepted.push_back(*s.request);
          s.stage = d->accept ? Stage::Authenticated : Stage::Closed;
        } else if (const auto* t = std::get_if<TxSubmit>(&m)) {
          if (s.stage != Stage::Authenticated) bad_order();
          s.pending_tx = t->record;
          s.stage = Stage::Submitted;
        } else if (const auto* d = std::get_if<TxDecision>(&m)) {
          if (s.stage != Stage::Submitted || !s.pending_tx) {
            bad_order();
          } else {
            if (d->accept) commits.emplace_back(*d, *s.pending_tx);
            s.pending_tx.reset();
          }
          d->accept ? ++rep.tx_committed : ++rep.tx_rejected;
          if (d->accept != (d->reason == "committed")) fail(where + "decision flag and reason disagree");
          s.stage = Stage::Authenticated;
        }
      } else {
        fail(where + "unrecognized line");
      }
    } catch (const std::exception& e) {
      fail(where + e.what());
    }
  }
  rep.sessions = sessions.size();

  if (!config) fail("missing config line");
  if (!log) fail("missing ledger line");
  if (config && log) {
    rep.blocks = log->blocks().size();
    rep.state_digest = log->state_digest();
    if (!log->verify_chain()) fail("ledger chain does not verify");

    ledger::Ledger fresh;
    chaincode::install_builtin(fresh, *config);
    if (!fresh.replay(log->blocks()) || fresh.state_digest() != rep.state_digest || fresh.height() != log->height())
      fail("re-executing the ledger log does not reproduce its state");

    for (const auto& req : accepted)
      if (!accepted_proof_verifies(req, *log, *config))
        fail("accepted proof in session " + std::to_string(req.session) + " does not verify");

    for (const auto& [decision, record] : commits) {
      if (decision.height == 0 || decision.height > log->height()) {
        fail("committed transaction points past the ledger");
        continue;
      }
      const auto block = log->block(decision.height);
      if (record.chaincode != chaincode::kTransact || block.tx_digests.size() != 1 ||
          block.tx_digests[0] != record.digest())
        fail("block " + std::to_string(decision.height) + " does not hold the committed transaction");
    }
  }
  rep.ok = rep.errors.empty();
  return rep;
}

}  // namespace pufzk::protocol
