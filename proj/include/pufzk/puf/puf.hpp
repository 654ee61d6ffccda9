#pragma once

// Arbiter PUF simulation under the linear additive delay model.
//
// A device holds n+1 Gaussian stage weights. The response to a challenge c is
// sign(<w, phi(c)>) with phi_i = prod_{j>=i} (1 - 2 c_j) and phi_n = 1, plus
// per-evaluation Gaussian noise on every stage weight.

#include <cstdint>
#include <random>
#include <vector>

#include "pufzk/common/bytes.hpp"
#include "pufzk/crypto/rng.hpp"
#include "pufzk/crypto/sha256.hpp"

namespace pufzk::puf {

inline constexpr std::size_t kDefaultStages = 64;
inline constexpr std::size_t kDefaultChallengeCount = 256;
inline constexpr double kDefaultNoiseRatio = 0.05;
inline constexpr int kDefaultRepetitions = 9;
// Enrollment happens once, so the reference response can afford a long vote.
inline constexpr int kEnrollmentRepetitions = 101;

// Evaluation noise source. Callers own it, so one device can be evaluated
// from several threads with separate generators.
using NoiseRng = std::mt19937_64;

struct Challenge {
  std::vector<std::uint8_t> bits;  // each 0 or 1

  std::size_t size() const { return bits.size(); }
  Bytes to_bytes() const;  // packed MSB-first
  static Challenge from_bytes(ByteSpan packed, std::size_t n);
  friend bool operator==(const Challenge&, const Challenge&) = default;
};

using ChallengeSet = std::vector<Challenge>;
using ResponseSet = std::vector<std::uint8_t>;  // one bit per challenge

class PufDevice {
 public:
  // Throws std::invalid_argument if noise_ratio < 0 or stages == 0.
  PufDevice(std::uint64_t device_seed, double noise_ratio, std::size_t stages = kDefaultStages);

  std::uint64_t seed() const { return seed_; }
  double noise_ratio() const { return noise_ratio_; }
  std::size_t stages() const { return weights_.size() - 1; }
  const std::vector<double>& weights() const { return weights_; }

  // Noiseless delay difference; the response is its sign.
  double delay(const Challenge& c) const;
  // One noisy evaluation. Throws std::invalid_argument on wrong challenge length.
  std::uint8_t eval_raw(const Challenge& c, NoiseRng& noise) const;
  // Per-bit majority over `repetitions` evaluations; repetitions must be odd.
  ResponseSet respond(const ChallengeSet& challenges, int repetitions, NoiseRng& noise) const;

  // Manufacturer serial of the simulated chip, used to refuse double enrollment.
  crypto::Digest hardware_tag() const;

 private:
  std::uint64_t seed_;
  double noise_ratio_;
  double noise_sigma_;  // noise_ratio * sqrt(n + 1)
  std::vector<double> weights_;
};

// `count` uniformly random challenges. Throws std::invalid_argument if count == 0.
ChallengeSet generate_challenges(crypto::Rng& rng, std::size_t count, std::size_t stages = kDefaultStages);

// Enrollment-time filter: draws candidates and keeps those whose raw response
// was identical over `trials` noisy evaluations, until `count` are found.
ChallengeSet select_stable_challenges(const PufDevice& device, crypto::Rng& rng, NoiseRng& noise,
                                      std::size_t count, int trials = 64);

double fractional_hamming(const ResponseSet& a, const ResponseSet& b);

// Response bits packed MSB-first, zero padded.
Bytes pack_bits(const ResponseSet& bits);

// Challenge sets as u32 count || u32 n || packed challenges.
Bytes encode_challenges(const ChallengeSet& set);
ChallengeSet decode_challenges(ByteSpan data);

}  // namespace pufzk::puf
