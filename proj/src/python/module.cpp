#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pufzk/bench/bench.hpp"
#include "pufzk/protocol/attacks.hpp"
#include "pufzk/protocol/transcript.hpp"

namespace py = pybind11;
using namespace pufzk;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::bytes to_py_bytes(ByteSpan b) { return {reinterpret_cast<const char*>(b.data()), b.size()}; }

Bytes from_py_bytes(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

py::dict session_dict(const protocol::Session& s) {
  py::dict d;
  d["session"] = s.id;
  d["accepted"] = s.accepted();
  d["reason"] = s.reason;
  d["messages"] = s.transcript.size();
  if (const auto req = s.auth_request()) d["proof_size"] = req->proof.size();
  return d;
}

}  // namespace

PYBIND11_MODULE(pufzk, m) {
  m.doc() = "PUF-bound zero-knowledge device authentication on a simulated ledger";

  m.def(
      "keygen",
      [](std::uint64_t seed) {
        auto rng = crypto::Rng::from_seed(seed);
        const auto kp = identity::KeyPair::generate(rng);
        return py::make_tuple(to_py_bytes(kp.sk.to_bytes()), to_py_bytes(kp.pk.to_bytes()));
      },
      py::arg("seed"), "Deterministic key pair: (32-byte secret scalar, 96-byte G2 public key).");
  m.def(
      "sign",
      [](const py::bytes& sk, const py::bytes& msg) {
        return to_py_bytes(zkp::sign(group::Scalar::from_bytes(from_py_bytes(sk)), from_py_bytes(msg)).to_bytes());
      },
      py::arg("sk"), py::arg("message"));
  m.def(
      "verify",
      [](const py::bytes& pk, const py::bytes& msg, const py::bytes& sig) {
        try {
          return zkp::verify_sig_bytes(group::G2::from_bytes(from_py_bytes(pk)), from_py_bytes(msg), from_py_bytes(sig));
        } catch (const DecodeError&) {
          return false;
        }
      },
      py::arg("pk"), py::arg("message"), py::arg("signature"));

  m.def(
      "puf_responses",
      [](std::uint64_t device_seed, std::size_t count, std::uint64_t challenge_seed, int repetitions, double noise) {
        auto rng = crypto::Rng::from_seed(challenge_seed);
        puf::NoiseRng nrng(challenge_seed ^ device_seed);
        const puf::PufDevice d(device_seed, noise);
        const auto r = d.respond(puf::generate_challenges(rng, count), repetitions, nrng);
        return std::vector<int>(r.begin(), r.end());
      },
      py::arg("device_seed"), py::arg("count") = 256, py::arg("challenge_seed") = 1,
      py::arg("repetitions") = puf::kDefaultRepetitions, py::arg("noise") = puf::kDefaultNoiseRatio,
      "Majority-voted responses of a simulated arbiter PUF to random challenges.");

  py::class_<protocol::Device>(m, "Device")
      .def_property_readonly("id", [](const protocol::Device& d) { return to_hex(d.id()); });

  py::class_<protocol::Session>(m, "Session")
      .def_property_readonly("id", [](const protocol::Session& s) { return s.id; })
      .def_property_readonly("accepted", &protocol::Session::accepted)
      .def_property_readonly("reason", [](const protocol::Session& s) { return s.reason; })
      .def("as_dict", &session_dict);

  py::class_<protocol::Testbed>(m, "Testbed")
      .def(py::init([](std::uint64_t seed, const std::string& params, const std::string& mode) {
             return std::make_unique<protocol::Testbed>(
                 bench::testbed_options(bench::parse_params(params), seed, bench::parse_mode(mode)));
           }),
           py::arg("seed") = 1, py::arg("params") = "default", py::arg("mode") = "corrected",
           "Literal mode uses a trust setup with alpha = 1.")
      .def("enroll", py::overload_cast<std::uint64_t>(&protocol::Testbed::enroll), py::arg("puf_seed"))
      .def(
          "authenticate",
          [](protocol::Testbed& tb, protocol::Device& d, const std::string& mode) {
            return tb.authenticate(d, bench::parse_mode(mode));
          },
          py::arg("device"), py::arg("mode") = "corrected")
      .def(
          "transact",
          [](protocol::Testbed& tb, protocol::Device& d, const protocol::Session& auth, const py::bytes& payload,
             const std::string& mode) { return tb.transact(d, auth, from_py_bytes(payload), bench::parse_mode(mode)); },
          py::arg("device"), py::arg("session"), py::arg("payload"), py::arg("mode") = "corrected")
      .def_property_readonly("height", [](protocol::Testbed& tb) { return tb.ledger().height(); })
      .def("verify_chain", [](protocol::Testbed& tb) { return tb.ledger().verify_chain(); })
      .def("state_digest", [](protocol::Testbed& tb) { return to_hex(tb.ledger().state_digest()); });

  m.def(
      "bench",
      [](int iterations, const std::string& mode, std::uint64_t seed, const std::string& params) {
        bench::BenchOptions o;
        o.iterations = iterations;
        o.mode = bench::parse_mode(mode);
        o.seed = seed;
        o.params = bench::parse_params(params);
        return to_py(bench::to_json(bench::run_bench(o)));
      },
      py::arg("iterations") = 50, py::arg("mode") = "corrected", py::arg("seed") = 1, py::arg("params") = "default",
      "Benchmark report as a dict (schema pufzk.bench.v1).");
  m.def(
      "validate_report",
      [](const py::object& report) {
        const std::string s = py::str(py::module_::import("json").attr("dumps")(report));
        return bench::validate_report(nlohmann::json::parse(s));
      },
      py::arg("report"), "Schema and invariant errors; empty when valid.");

  m.def(
      "demo",
      [](std::uint64_t seed) {
        const auto d = bench::run_demo(seed);
        py::dict out;
        out["transcript"] = d.transcript;
        out["verify_chain"] = d.chain_ok;
        out["height"] = d.height;
        out["state_digest"] = to_hex(d.state_digest);
        return out;
      },
      py::arg("seed") = 1);
  m.def(
      "audit",
      [](const std::string& transcript) {
        const auto r = protocol::audit_transcript(transcript);
        py::dict out;
        out["ok"] = r.ok;
        out["messages"] = r.messages;
        out["sessions"] = r.sessions;
        out["blocks"] = r.blocks;
        out["auth_accepted"] = r.auth_accepted;
        out["tx_committed"] = r.tx_committed;
        out["tx_rejected"] = r.tx_rejected;
        out["state_digest"] = to_hex(r.state_digest);
        out["errors"] = r.errors;
        return out;
      },
      py::arg("transcript"));

  m.def(
      "attack",
      [](const std::vector<std::string>& suites, std::uint64_t seed, int trials) {
        protocol::SuiteOptions o;
        o.suites = {suites.begin(), suites.end()};
        o.seed = seed;
        o.replay_trials = o.forgery_trials = o.mitm_flips = o.tamper_trials = trials;
        py::list rows;
        for (const auto& r : protocol::run_attack_suite(o)) {
          py::dict d;
          d["suite"] = r.suite;
          d["scenario"] = r.name;
          d["mode"] = zkp::mode_name(r.mode);
          d["trials"] = r.trials;
          d["accepted"] = r.accepted;
          d["security"] = r.security;
          d["passed"] = r.passed();
          rows.append(d);
        }
        return rows;
      },
      py::arg("suites"), py::arg("seed") = 1, py::arg("trials") = 10,
      "Adversary suite with every trial count set to `trials`.");
}
