#pragma once

// Benchmark harness, parameter sets and the deterministic demo run used by
// the command-line tool, the acceptance checks and the Python bindings.

#include <nlohmann/json.hpp>

#include "pufzk/protocol/testbed.hpp"

namespace pufzk::bench {

using protocol::Mode;

inline constexpr std::string_view kReportSchema = "pufzk.bench.v1";
inline constexpr std::string_view kParamsEnv = "PUFZK_PARAMS";

struct ParamSet {
  std::string name = "default";
  std::size_t stages = puf::kDefaultStages;
  std::size_t challenges = puf::kDefaultChallengeCount;
  std::size_t subset_size = 64;
  double noise_ratio = puf::kDefaultNoiseRatio;
  int enrollment_repetitions = puf::kEnrollmentRepetitions;
};

// "<preset>[,key=value...]" or just "key=value,...". Presets: default, small,
// noisy. Keys: stages, challenges, subset, noise, enroll_reps.
// Throws std::invalid_argument on unknown names, keys or bad values.
ParamSet parse_params(std::string_view spec);
std::string format_params(const ParamSet& p);
nlohmann::json params_json(const ParamSet& p);

Mode parse_mode(std::string_view s);  // "literal" | "corrected"

// Literal mode runs with alpha = 1, the only setting where honest literal
// proofs verify.
protocol::TestbedOptions testbed_options(const ParamSet& p, std::uint64_t seed, Mode mode);

struct BenchOptions {
  int iterations = 50;
  Mode mode = Mode::Corrected;
  std::uint64_t seed = 1;
  ParamSet params;
};

struct IterationRecord {
  double challenge_gen_ms = 0;
  double puf_response_ms = 0;
  double input_prep_ms = 0;
  double proof_gen_ms = 0;
  double verify_ms = 0;
  double enroll_ms = 0;
  double transaction_ms = 0;
  double end_to_end_ms = 0;
  std::size_t proof_size_bytes = 0;
  bool accepted = false;
};

// Serialized sizes standing in for memory figures.
struct ArtifactSizes {
  std::size_t witness_inputs = 0;
  std::size_t proof = 0;
  std::size_t verification_inputs = 0;
  std::size_t transaction_proof = 0;
  std::size_t device_record = 0;
};

struct BenchReport {
  BenchOptions options;
  double trust_setup_ms = 0;
  std::vector<IterationRecord> records;  // warm-up excluded
  ArtifactSizes artifacts;
};

// Throws std::invalid_argument if iterations < 1.
BenchReport run_bench(const BenchOptions& options);

nlohmann::json to_json(const BenchReport& report);
std::string render_text(const BenchReport& report);

// Schema and invariant check for a report in JSON form; empty when valid.
std::vector<std::string> validate_report(const nlohmann::json& report);

struct DemoResult {
  std::string transcript;
  bool chain_ok = false;
  std::uint64_t height = 0;
  crypto::Digest state_digest{};
};

// Two devices enroll, authenticate and transact; one transaction is altered
// in flight and rejected. Byte-identical output for a fixed seed.
DemoResult run_demo(std::uint64_t seed, const ParamSet& params = {});

}  // namespace pufzk::bench
