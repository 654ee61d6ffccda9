#include "pufzk/bench/bench.hpp"

#include "pufzk/protocol/transcript.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace pufzk::bench {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

// Millisecond fields of an iteration record, in report order.
constexpr std::array<std::string_view, 8> kTimeFields = {
    "challenge_gen_ms", "puf_response_ms", "input_prep_ms", "proof_gen_ms",
    "verify_ms",        "enroll_ms",       "transaction_ms", "end_to_end_ms"};

std::array<double, 8> times(const IterationRecord& r) {
  return {r.challenge_gen_ms, r.puf_response_ms, r.input_prep_ms, r.proof_gen_ms,
          r.verify_ms,        r.enroll_ms,       r.transaction_ms, r.end_to_end_ms};
}

struct Summary {
  double mean = 0, median = 0, min = 0, max = 0;
};

Summary summarize(std::vector<double> v) {
  Summary s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  const std::size_t n = v.size();
  s.median = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
  return s;
}

json summary_json(const Summary& s) { return {{"mean", s.mean}, {"median", s.median}, {"min", s.min}, {"max", s.max}}; }

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw std::invalid_argument("bad value for parameter " + std::string(key) + ": " + std::string(v));
  return out;
}

IterationRecord cycle(protocol::Testbed& tb, Mode mode, std::uint64_t puf_seed, ArtifactSizes* sizes) {
  IterationRecord r;
  const auto start = Clock::now();
  auto t = start;
  protocol::Device d = tb.enroll(puf_seed);
  r.enroll_ms = ms_since(t);

  const protocol::Session auth = tb.authenticate(d, mode);
  const auto& pt = d.last_timings();
  r.challenge_gen_ms = pt.challenge_ms;
  r.puf_response_ms = pt.response_ms;
  r.input_prep_ms = pt.prep_ms;
  r.proof_gen_ms = pt.proof_ms;
  r.verify_ms = tb.verifier().last_verify_ms();
  const Bytes& proof = auth.auth_request()->proof;
  r.proof_size_bytes = proof.size();

  t = Clock::now();
  const Bytes payload = {'b', 'e', 'n', 'c', 'h'};
  const protocol::Session tx = tb.transact(d, auth, payload, mode);
  r.transaction_ms = ms_since(t);
  r.end_to_end_ms = ms_since(start);
  r.accepted = auth.accepted() && tx.accepted();

  if (sizes) {
    const std::size_t subset_bytes = (d.record().subset_size + 7) / 8;
    sizes->proof = proof.size();
    sizes->device_record = d.record().encode().size();
    sizes->transaction_proof = std::get<protocol::TxSubmit>(protocol::decode_message(tx.transcript.at(0).message))
                                   .record.proof.size();
    if (mode == Mode::Corrected) {
      // sk, response scalar and the raw response bits it is hashed from
      sizes->witness_inputs = 2 * group::Scalar::kEncodedSize + subset_bytes;
      // device id, pk, W, round, nonce
      sizes->verification_inputs = 32 + group::G2::kEncodedSize + group::G1::kEncodedSize + 4 + 16;
    } else {
      sizes->witness_inputs = group::Scalar::kEncodedSize + subset_bytes;
      sizes->verification_inputs = group::G2::kEncodedSize;
    }
  }
  return r;
}

}  // namespace

ParamSet parse_params(std::string_view spec) {
  ParamSet p;
  std::size_t i = 0;
  bool first = true;
  while (i <= spec.size()) {
    const std::size_t j = std::min(spec.find(',', i), spec.size());
    const std::string_view item = spec.substr(i, j - i);
    i = j + 1;
    if (item.empty()) {
      if (j == spec.size()) break;
      continue;
    }
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      if (!first) throw std::invalid_argument("preset name must come first: " + std::string(item));
      if (item == "default") {
        p = ParamSet{};
      } else if (item == "small") {
        p = ParamSet{};
        p.challenges = 128;
        p.subset_size = 32;
        p.enrollment_repetitions = 51;
      } else if (item == "noisy") {
        p = ParamSet{};
        p.noise_ratio = 0.10;
      } else {
        throw std::invalid_argument("unknown parameter set: " + std::string(item));
      }
      p.name = std::string(item);
    } else {
      const std::string_view key = item.substr(0, eq), v = item.substr(eq + 1);
      if (key == "stages") p.stages = parse_number<std::size_t>(key, v);
      else if (key == "challenges") p.challenges = parse_number<std::size_t>(key, v);
      else if (key == "subset") p.subset_size = parse_number<std::size_t>(key, v);
      else if (key == "noise") p.noise_ratio = parse_number<double>(key, v);
      else if (key == "enroll_reps") p.enrollment_repetitions = parse_number<int>(key, v);
      else throw std::invalid_argument("unknown parameter: " + std::string(key));
      if (p.name.find('+') == std::string::npos) p.name += "+";
    }
    first = false;
    if (j == spec.size()) break;
  }
  if (p.stages == 0 || p.stages > 256) throw std::invalid_argument("stages must be in [1, 256]");
  if (p.subset_size == 0 || p.challenges == 0 || p.challenges % p.subset_size != 0)
    throw std::invalid_argument("challenges must be a positive multiple of subset");
  if (!(p.noise_ratio >= 0) || p.noise_ratio > 1) throw std::invalid_argument("noise must be in [0, 1]");
  if (p.enrollment_repetitions < 1 || p.enrollment_repetitions % 2 == 0)
    throw std::invalid_argument("enroll_reps must be odd and positive");
  return p;
}

std::string format_params(const ParamSet& p) {
  std::ostringstream o;
  o << p.name << " (stages=" << p.stages << ", challenges=" << p.challenges << ", subset=" << p.subset_size
    << ", noise=" << p.noise_ratio << ", enroll_reps=" << p.enrollment_repetitions << ")";
  return o.str();
}

json params_json(const ParamSet& p) {
  return {{"name", p.name},
          {"stages", p.stages},
          {"challenges", p.challenges},
          {"subset", p.subset_size},
          {"noise", p.noise_ratio},
          {"enroll_reps", p.enrollment_repetitions}};
}

Mode parse_mode(std::string_view s) {
  if (s == "corrected") return Mode::Corrected;
  if (s == "literal") return Mode::Literal;
  throw std::invalid_argument("mode must be literal or corrected: " + std::string(s));
}


protocol::TestbedOptions testbed_options(const ParamSet& p, std::uint64_t seed, Mode mode) {
  protocol::TestbedOptions o;
  o.seed = seed;
  o.literal = mode == Mode::Literal;
  if (o.literal) o.alpha = group::Scalar::one();
  o.noise_ratio = p.noise_ratio;
  o.stages = p.stages;
  o.enrollment.challenge_count = p.challenges;
  o.enrollment.subset_size = p.subset_size;
  o.enrollment.enrollment_repetitions = p.enrollment_repetitions;
  return o;
}

BenchReport run_bench(const BenchOptions& options) {
  if (options.iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  BenchReport rep;
  rep.options = options;

  {
    auto rng = crypto::Rng::from_seed(options.seed ^ 0x7e57ULL);
    const auto t = Clock::now();
    const auto setup = zkp::TrustSetup::generate(rng);
    rep.trust_setup_ms = ms_since(t);
    (void)setup;
  }

  protocol::Testbed tb(testbed_options(options.params, options.seed, options.mode));
  cycle(tb, options.mode, options.seed * 1000003ULL, nullptr);  // warm-up
  for (int i = 0; i < options.iterations; ++i)
    rep.records.push_back(cycle(tb, options.mode, options.seed * 1000003ULL + 1 + static_cast<std::uint64_t>(i),
                                i == 0 ? &rep.artifacts : nullptr));
  return rep;
}

json to_json(const BenchReport& rep) {
  json iters = json::array();
  std::vector<std::vector<double>> cols(kTimeFields.size() + 1);
  for (const auto& r : rep.records) {
    json it;
    const auto v = times(r);
    for (std::size_t f = 0; f < kTimeFields.size(); ++f) {
      it[std::string(kTimeFields[f])] = v[f];
      cols[f].push_back(v[f]);
    }
    it["proof_size_bytes"] = r.proof_size_bytes;
    it["accepted"] = r.accepted;
    cols.back().push_back(static_cast<double>(r.proof_size_bytes));
    iters.push_back(std::move(it));
  }
  json agg;
  for (std::size_t f = 0; f < kTimeFields.size(); ++f) agg[std::string(kTimeFields[f])] = summary_json(summarize(cols[f]));
  agg["proof_size_bytes"] = summary_json(summarize(cols.back()));

  const auto& a = rep.artifacts;
  return {
      {"schema", kReportSchema},
      {"metadata",
       {{"mode", zkp::mode_name(rep.options.mode)},
        {"iterations", rep.options.iterations},
        {"warmup_iterations", 1},
        {"seed", rep.options.seed},
        {"params", params_json(rep.options.params)},
        {"clock", "steady_clock"},
        {"literal_alpha", rep.options.mode == Mode::Literal ? json("one") : json(nullptr)}}},
      {"trust_setup_ms", rep.trust_setup_ms},
      {"iterations", std::move(iters)},
      {"aggregate", std::move(agg)},
      {"absent_stages",
       {{"circuit_compilation", "no circuit: sigma-protocol proofs are built directly"},
        {"witness_generation", "no separate witness stage: covered by input_prep_ms"}}},
      {"artifact_sizes_bytes",
       {{"witness_inputs", a.witness_inputs},
        {"proof", a.proof},
        {"verification_inputs", a.verification_inputs},
        {"transaction_proof", a.transaction_proof},
        {"device_record", a.device_record}}},
      {"reference",
       {{"binding", false},
        {"note", "figures from a different proof system and machine; informational only"},
        {"trust_setup_ms", 1415.60},
        {"end_to_end_ms", 2800.0},
        {"proof_size_bytes", 805}}},
  };
}

std::string render_text(const BenchReport& rep) {
  const json j = to_json(rep);
  std::ostringstream o;
  char buf[160];
  o << "pufzk benchmark report (" << kReportSchema << ")\n";
  o << "mode " << zkp::mode_name(rep.options.mode) << ", " << rep.options.iterations << " iterations (+1 warm-up), seed "
    << rep.options.seed << "\n";
  o << "parameters " << format_params(rep.options.params) << "\n\n";
  std::snprintf(buf, sizeof buf, "trust setup: %.3f ms\n\n", rep.trust_setup_ms);
  o << buf;
  std::snprintf(buf, sizeof buf, "%-18s %10s %10s %10s %10s\n", "stage (ms)", "mean", "median", "min", "max");
  o << buf;
  for (const auto f : kTimeFields) {
    const auto& s = j["aggregate"][std::string(f)];
    std::snprintf(buf, sizeof buf, "%-18s %10.3f %10.3f %10.3f %10.3f\n", std::string(f).c_str(), s["mean"].get<double>(),
                  s["median"].get<double>(), s["min"].get<double>(), s["max"].get<double>());
    o << buf;
  }
  o << "circuit compilation, witness generation: absent (no analogue)\n\n";
  const auto& a = rep.artifacts;
  o << "artifact sizes (bytes): proof " << a.proof << ", witness inputs " << a.witness_inputs
    << ", verification inputs " << a.verification_inputs << ", transaction proof " << a.transaction_proof
    << ", device record " << a.device_record << "\n";
  const auto accepted = std::count_if(rep.records.begin(), rep.records.end(), [](const auto& r) { return r.accepted; });
  o << "accepted cycles: " << accepted << "/" << rep.records.size() << "\n";
  o << "reference (non-binding): trust setup 1415.60 ms, end-to-end ~2800 ms, proof 805 bytes\n";
  return o.str();
}

std::vector<std::string> validate_report(const json& j) {
  std::vector<std::string> err;
  auto need = [&](const json& obj, std::string_view key, json::value_t type, std::string_view where) -> bool {
    const std::string k(key);
    if (!obj.is_object() || !obj.contains(k)) {
      err.push_back(std::string(where) + ": missing " + k);
      return false;
    }
    const auto t = obj[k].type();
    const bool num = type == json::value_t::number_float &&
                     (t == json::value_t::number_float || t == json::value_t::number_integer ||
                      t == json::value_t::number_unsigned);
    const bool uint = type == json::value_t::number_unsigned &&
                      (t == json::value_t::number_unsigned || (t == json::value_t::number_integer && obj[k].get<long long>() >= 0));
    if (!num && !uint && t != type) {
      err.push_back(std::string(where) + ": " + k + " has the wrong type");
      return false;
    }
    return true;
  };
  using vt = json::value_t;
  if (!j.is_object()) return {"report is not an object"};
  if (!need(j, "schema", vt::string, "report") || j["schema"] != kReportSchema) err.push_back("report: unknown schema");
  std::uint64_t iterations = 0;
  if (need(j, "metadata", vt::object, "report")) {
    const auto& m = j["metadata"];
    if (need(m, "mode", vt::string, "metadata") && m["mode"] != "literal" && m["mode"] != "corrected")
      err.push_back("metadata: bad mode");
    if (need(m, "iterations", vt::number_unsigned, "metadata")) iterations = m["iterations"].get<std::uint64_t>();
    need(m, "seed", vt::number_unsigned, "metadata");
    need(m, "params", vt::object, "metadata");
    need(m, "warmup_iterations", vt::number_unsigned, "metadata");
  }
  if (need(j, "trust_setup_ms", vt::number_float, "report") && j["trust_setup_ms"].get<double>() < 0)
    err.push_back("report: negative trust_setup_ms");

  std::vector<std::vector<double>> cols(kTimeFields.size() + 1);
  if (need(j, "iterations", vt::array, "report")) {
    const auto& it = j["iterations"];
    if (iterations < 1 || it.size() != iterations) err.push_back("report: iteration count does not match metadata");
    std::optional<std::uint64_t> size;
    for (std::size_t i = 0; i < it.size(); ++i) {
      const std::string where = "iteration " + std::to_string(i);
      double stage_max = 0;
      bool complete = true;
      for (std::size_t f = 0; f < kTimeFields.size(); ++f) {
        if (!need(it[i], kTimeFields[f], vt::number_float, where)) {
          complete = false;
          continue;
        }
        const double v = it[i][std::string(kTimeFields[f])].get<double>();
        if (!(v >= 0)) err.push_back(where + ": negative " + std::string(kTimeFields[f]));
        cols[f].push_back(v);
        if (kTimeFields[f] != "end_to_end_ms") stage_max = std::max(stage_max, v);
      }
      if (complete && it[i]["end_to_end_ms"].get<double>() < stage_max)
        err.push_back(where + ": end_to_end_ms below a component stage");
      if (need(it[i], "proof_size_bytes", vt::number_unsigned, where)) {
        const auto s = it[i]["proof_size_bytes"].get<std::uint64_t>();
        cols.back().push_back(static_cast<double>(s));
        if (size && *size != s) err.push_back(where + ": proof size differs from iteration 0");
        size = s;
      }
      need(it[i], "accepted", vt::boolean, where);
    }
  }
  if (need(j, "aggregate", vt::object, "report")) {
    auto check = [&](std::string_view field, const std::vector<double>& col) {
      if (!need(j["aggregate"], field, vt::object, "aggregate")) return;
      const auto& a = j["aggregate"][std::string(field)];
      const Summary s = summarize(col);
      const std::pair<const char*, double> expect[] = {
          {"mean", s.mean}, {"median", s.median}, {"min", s.min}, {"max", s.max}};
      for (const auto& [k, v] : expect) {
        if (!need(a, k, vt::number_float, "aggregate " + std::string(field))) continue;
        if (std::abs(a[k].get<double>() - v) > 1e-9 * std::max(1.0, std::abs(v)))
          err.push_back("aggregate " + std::string(field) + ": " + k + " does not match the iterations");
      }
    };
    for (std::size_t f = 0; f < kTimeFields.size(); ++f) check(kTimeFields[f], cols[f]);
    check("proof_size_bytes", cols.back());
  }
  if (need(j, "absent_stages", vt::object, "report"))
    for (const auto* k : {"circuit_compilation", "witness_generation"}) need(j["absent_stages"], k, vt::string, "absent_stages");
  if (need(j, "artifact_sizes_bytes", vt::object, "report"))
    for (const auto* k : {"witness_inputs", "proof", "verification_inputs", "transaction_proof", "device_record"})
      need(j["artifact_sizes_bytes"], k, vt::number_unsigned, "artifact_sizes_bytes");
  if (need(j, "reference", vt::object, "report")) {
    const auto& r = j["reference"];
    if (!need(r, "binding", vt::boolean, "reference") || r["binding"].get<bool>())
      err.push_back("reference: must be marked non-binding");
    need(r, "trust_setup_ms", vt::number_float, "reference");
    need(r, "end_to_end_ms", vt::number_float, "reference");
    need(r, "proof_size_bytes", vt::number_unsigned, "reference");
  }
  return err;
}

DemoResult run_demo(std::uint64_t seed, const ParamSet& params) {
  protocol::Testbed tb(testbed_options(params, seed, Mode::Corrected));
  std::vector<protocol::Session> sessions;
  auto text = [](std::string_view s) { return Bytes(s.begin(), s.end()); };

  protocol::Device a = tb.enroll(seed * 2 + 1);
  protocol::Device b = tb.enroll(seed * 2 + 2);

  const auto auth_a = tb.authenticate(a, Mode::Corrected);
  sessions.push_back(auth_a);
  sessions.push_back(tb.transact(a, auth_a, text("sensor=a;temp=21.5"), Mode::Corrected));
  sessions.push_back(tb.transact(a, auth_a, text("sensor=a;temp=21.7"), Mode::Corrected));

  const auto auth_b = tb.authenticate(b, Mode::Corrected);
  sessions.push_back(auth_b);
  sessions.push_back(tb.transact(b, auth_b, text("sensor=b;valve=open"), Mode::Corrected,
                                 [](protocol::TxSubmit& m) { m.record.payload.back() ^= 0x01; }));
  sessions.push_back(tb.transact(b, auth_b, text("sensor=b;valve=closed"), Mode::Corrected));

  // A second login rotates a's challenge subset again.
  const auto again = tb.authenticate(a, Mode::Corrected);
  sessions.push_back(again);
  sessions.push_back(tb.transact(a, again, text("sensor=a;temp=21.9"), Mode::Corrected));

  DemoResult out;
  out.transcript = protocol::write_transcript(sessions, tb.ledger(), tb.config());
  out.chain_ok = tb.ledger().verify_chain();
  out.height = tb.ledger().height();
  out.state_digest = tb.ledger().state_digest();
  return out;
}

}  // namespace pufzk::bench
