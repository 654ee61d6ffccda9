// pufzk: benchmark, adversary suite, demo and transcript audit.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 acceptance failure.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pufzk/bench/bench.hpp"
#include "pufzk/protocol/attacks.hpp"
#include "pufzk/protocol/transcript.hpp"

namespace {

using namespace pufzk;
using nlohmann::json;

constexpr int kOk = 0, kUsage = 1, kFailed = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bench::ParamSet resolve_params(const std::string& flag) {
  if (!flag.empty()) return bench::parse_params(flag);
  if (const char* env = std::getenv(std::string(bench::kParamsEnv).c_str()); env && *env) return bench::parse_params(env);
  return {};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) throw UsageError("cannot write " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// report.json -> report.txt
std::string text_path(const std::string& json_path) {
  const auto dot = json_path.rfind('.');
  const auto slash = json_path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return json_path + ".txt";
  return json_path.substr(0, dot) + ".txt";
}

struct BenchArgs {
  int iterations = 50;
  std::string mode = "corrected";
  std::uint64_t seed = 1;
  std::string out;
  std::string params;
};

int cmd_bench(const BenchArgs& a) {
  bench::BenchOptions o;
  o.iterations = a.iterations;
  o.mode = bench::parse_mode(a.mode);
  o.seed = a.seed;
  o.params = resolve_params(a.params);
  if (o.iterations < 1) throw UsageError("--iterations must be at least 1");
  if (!a.out.empty()) write_file(a.out, "");  // fail before the run, not after

  const auto report = bench::run_bench(o);
  const json j = bench::to_json(report);
  const std::string text = bench::render_text(report);
  std::cout << text;
  if (!a.out.empty()) {
    write_file(a.out, j.dump(2) + "\n");
    write_file(text_path(a.out), text);
    std::cout << "report written to " << a.out << "\n";
  }
  const auto errors = bench::validate_report(j);
  for (const auto& e : errors) std::cerr << "invalid report: " << e << "\n";
  const bool all_accepted =
      std::all_of(report.records.begin(), report.records.end(), [](const auto& r) { return r.accepted; });
  if (!all_accepted) std::cerr << "some cycles were rejected\n";
  return errors.empty() && all_accepted ? kOk : kFailed;
}

struct AttackArgs {
  std::string suites = "replay,impersonate,mitm,tamper,literal";
  std::uint64_t seed = 1;
  std::string out;
  int replay_trials = 100;
  int forgery_trials = 1000;
  int mitm_flips = 1000;
  int tamper_trials = 100;
};

std::string status(const protocol::ScenarioResult& r) {
  if (r.mode == protocol::Mode::Literal) return r.passed() ? "reproduced" : "NOT REPRODUCED";
  if (!r.security) return r.passed() ? "ok" : "FAILED";
  return r.passed() ? "held" : "BROKEN";
}

int cmd_attack(const AttackArgs& a) {
  protocol::SuiteOptions o;
  o.suites.clear();
  std::stringstream list(a.suites);
  for (std::string s; std::getline(list, s, ',');) {
    if (s.empty()) continue;
    if (!protocol::kSuites.count(s)) throw UsageError("unknown suite: " + s);
    o.suites.insert(s);
  }
  if (o.suites.empty()) throw UsageError("no suites selected");
  o.seed = a.seed;
  o.replay_trials = a.replay_trials;
  o.forgery_trials = a.forgery_trials;
  o.mitm_flips = a.mitm_flips;
  o.tamper_trials = a.tamper_trials;
  if (std::min({o.replay_trials, o.forgery_trials, o.mitm_flips, o.tamper_trials}) < 1)
    throw UsageError("trial counts must be positive");
  if (!a.out.empty()) write_file(a.out, "");

  const auto results = protocol::run_attack_suite(o);
  const bool held = protocol::defenses_hold(results);

  char line[160];
  std::snprintf(line, sizeof line, "%-12s %-30s %-10s %9s %9s  %s\n", "suite", "scenario", "mode", "accepted", "trials",
                "result");
  std::cout << line;
  json rows = json::array();
  for (const auto& r : results) {
    const char* mode = zkp::mode_name(r.mode);
    std::snprintf(line, sizeof line, "%-12s %-30s %-10s %9d %9d  %s\n", r.suite.c_str(), r.name.c_str(), mode,
                  r.accepted, r.trials, status(r).c_str());
    std::cout << line;
    rows.push_back({{"suite", r.suite},
                    {"scenario", r.name},
                    {"mode", mode},
                    {"trials", r.trials},
                    {"accepted", r.accepted},
                    {"security", r.security},
                    {"expect_accept", r.expect_accept},
                    {"result", status(r)}});
  }
  std::cout << "\ncorrected-mode defenses: " << (held ? "all held" : "BROKEN") << "\n";
  if (!a.out.empty()) {
    const json j = {{"schema", "pufzk.attack.v1"}, {"seed", a.seed}, {"defenses_hold", held}, {"scenarios", rows}};
    write_file(a.out, j.dump(2) + "\n");
  }
  return held ? kOk : kFailed;
}

int cmd_demo(std::uint64_t seed, const std::string& out, const std::string& params) {
  const auto p = resolve_params(params);
  const auto demo = bench::run_demo(seed, p);
  if (out.empty()) {
    std::cout << demo.transcript;
  } else {
    write_file(out, demo.transcript);
    std::cout << "transcript written to " << out << "\n";
  }
  (out.empty() ? std::cerr : std::cout) << "height " << demo.height << ", state digest "
                                         << to_hex(demo.state_digest) << ", verify_chain = " << demo.chain_ok << "\n";
  return demo.chain_ok ? kOk : kFailed;
}

int cmd_audit(const std::string& path) {
  const auto rep = protocol::audit_transcript(read_file(path));
  std::cout << "messages " << rep.messages << ", sessions " << rep.sessions << ", blocks " << rep.blocks << "\n"
            << "auth accepted " << rep.auth_accepted << ", rejected " << rep.auth_rejected << "\n"
            << "tx committed " << rep.tx_committed << ", rejected " << rep.tx_rejected << "\n"
            << "state digest " << to_hex(rep.state_digest) << "\n";
  for (const auto& e : rep.errors) std::cout << "error: " << e << "\n";
  std::cout << (rep.ok ? "audit: ok" : "audit: FAILED") << "\n";
  return rep.ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PUF-bound zero-knowledge device authentication: benchmark, attacks, demo, audit"};
  app.require_subcommand(1);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time full enroll -> auth -> transact cycles");
  bench->add_option("--iterations,-n", bench_args.iterations, "Measured iterations (one extra warm-up runs first)")
      ->capture_default_str();
  bench->add_option("--mode", bench_args.mode, "literal or corrected")->capture_default_str();
  bench->add_option("--seed", bench_args.seed)->capture_default_str();
  bench->add_option("--out", bench_args.out, "JSON report path; a .txt rendering is written beside it");
  bench->add_option("--params", bench_args.params, "Parameter set, e.g. default or small,noise=0.08 (env PUFZK_PARAMS)");

  AttackArgs attack_args;
  auto* attack = app.add_subcommand("attack", "Run the adversary suite");
  attack->add_option("--suites", attack_args.suites, "Comma-separated: replay,impersonate,mitm,tamper,literal")
      ->capture_default_str();
  attack->add_option("--seed", attack_args.seed)->capture_default_str();
  attack->add_option("--out", attack_args.out, "JSON results path");
  attack->add_option("--replay-trials", attack_args.replay_trials)->capture_default_str();
  attack->add_option("--forgery-trials", attack_args.forgery_trials)->capture_default_str();
  attack->add_option("--mitm-flips", attack_args.mitm_flips)->capture_default_str();
  attack->add_option("--tamper-trials", attack_args.tamper_trials)->capture_default_str();

  std::uint64_t demo_seed = 1;
  std::string demo_out, demo_params;
  auto* demo = app.add_subcommand("demo", "Deterministic walkthrough; writes an audit transcript");
  demo->add_option("--seed", demo_seed)->capture_default_str();
  demo->add_option("--out", demo_out, "Transcript path (stdout when omitted)");
  demo->add_option("--params", demo_params, "Parameter set (env PUFZK_PARAMS)");

  std::string audit_path;
  auto* audit = app.add_subcommand("audit", "Check a transcript written by demo");
  audit->add_option("transcript", audit_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*bench) return cmd_bench(bench_args);
    if (*attack) return cmd_attack(attack_args);
    if (*demo) return cmd_demo(demo_seed, demo_out, demo_params);
    if (*audit) return cmd_audit(audit_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
