#include "pufzk/puf/puf.hpp"

#include <cmath>
#include <stdexcept>

namespace pufzk::puf {

Bytes Challenge::to_bytes() const {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
  return out;
}

Challenge Challenge::from_bytes(ByteSpan packed, std::size_t n) {
  if (packed.size() != (n + 7) / 8) throw DecodeError("challenge length mismatch");
  Challenge c;
  c.bits.resize(n);
  for (std::size_t i = 0; i < n; ++i) c.bits[i] = (packed[i / 8] >> (7 - i % 8)) & 1;
  for (std::size_t i = n; i < packed.size() * 8; ++i)
    if ((packed[i / 8] >> (7 - i % 8)) & 1) throw DecodeError("nonzero challenge padding");
  return c;
}

PufDevice::PufDevice(std::uint64_t device_seed, double noise_ratio, std::size_t stages)
    : seed_(device_seed), noise_ratio_(noise_ratio) {
  if (!(noise_ratio >= 0.0)) throw std::invalid_argument("noise_ratio must be >= 0");
  if (stages == 0) throw std::invalid_argument("stages must be >= 1");
  std::mt19937_64 gen(device_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  weights_.resize(stages + 1);
  for (auto& w : weights_) w = normal(gen);
  // Independent N(0, noise_ratio^2) on each weight sums to this, since |phi_i| = 1.
  noise_sigma_ = noise_ratio * std::sqrt(static_cast<double>(stages + 1));
}

double PufDevice::delay(const Challenge& c) const {
  const std::size_t n = stages();
  if (c.size() != n) throw std::invalid_argument("challenge length does not match PUF stages");
  double sum = weights_[n];
  double phi = 1.0;
  for (std::size_t i = n; i-- > 0;) {
    if (c.bits[i]) phi = -phi;
    sum += weights_[i] * phi;
  }
  return sum;
}

std::uint8_t PufDevice::eval_raw(const Challenge& c, NoiseRng& noise) const {
  double d = delay(c);
  if (noise_sigma_ > 0.0) d += std::normal_distribution<double>(0.0, noise_sigma_)(noise);
  return d > 0.0 ? 1 : 0;
}

ResponseSet PufDevice::respond(const ChallengeSet& challenges, int repetitions, NoiseRng& noise) const {
  if (repetitions < 1 || repetitions % 2 == 0) throw std::invalid_argument("repetitions must be odd and >= 1");
  ResponseSet out;
  out.reserve(challenges.size());
  for (const auto& c : challenges) {
    const double d = delay(c);
    int ones = 0;
    for (int k = 0; k < repetitions; ++k) {
      double v = d;
      if (noise_sigma_ > 0.0) v += std::normal_distribution<double>(0.0, noise_sigma_)(noise);
      ones += v > 0.0;
    }
    out.push_back(2 * ones > repetitions ? 1 : 0);
  }
  return out;
}

crypto::Digest PufDevice::hardware_tag() const {
  ByteWriter w;
  w.raw(as_bytes("pufzk/puf/hardware-tag")).u64(seed_).u64(stages());
  return crypto::sha256(w.bytes());
}

ChallengeSet generate_challenges(crypto::Rng& rng, std::size_t count, std::size_t stages) {
  if (count == 0) throw std::invalid_argument("challenge count must be >= 1");
  if (stages == 0) throw std::invalid_argument("stages must be >= 1");
  ChallengeSet out(count);
  for (auto& c : out) {
    const Bytes raw = rng.bytes((stages + 7) / 8);
    c.bits.resize(stages);
    for (std::size_t i = 0; i < stages; ++i) c.bits[i] = (raw[i / 8] >> (7 - i % 8)) & 1;
  }
  return out;
}

ChallengeSet select_stable_challenges(const PufDevice& device, crypto::Rng& rng, NoiseRng& noise,
                                      std::size_t count, int trials) {
  if (count == 0) throw std::invalid_argument("challenge count must be >= 1");
  ChallengeSet out;
  out.reserve(count);
  const std::size_t max_candidates = 1000 * count;
  for (std::size_t tried = 0; out.size() < count; ++tried) {
    if (tried == max_candidates) throw std::runtime_error("PUF too noisy to find stable challenges");
    auto candidate = std::move(generate_challenges(rng, 1, device.stages())[0]);
    const std::uint8_t first = device.eval_raw(candidate, noise);
    bool stable = true;
    for (int k = 1; k < trials && stable; ++k) stable = device.eval_raw(candidate, noise) == first;
    if (stable) out.push_back(std::move(candidate));
  }
  return out;
}

double fractional_hamming(const ResponseSet& a, const ResponseSet& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("response sets must be equal-length and non-empty");
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] != b[i]);
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

Bytes pack_bits(const ResponseSet& bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
  return out;
}

Bytes encode_challenges(const ChallengeSet& set) {
  ByteWriter w;
  const std::size_t n = set.empty() ? 0 : set.front().size();
  w.u32(static_cast<std::uint32_t>(set.size())).u32(static_cast<std::uint32_t>(n));
  for (const auto& c : set) {
    if (c.size() != n) throw std::invalid_argument("mixed challenge lengths");
    w.raw(c.to_bytes());
  }
  return std::move(w).take();
}

ChallengeSet decode_challenges(ByteSpan data) {
  ByteReader r(data);
  const std::uint32_t count = r.u32();
  const std::uint32_t n = r.u32();
  if (n == 0 || n > 4096) throw DecodeError("bad challenge length");
  const std::size_t width = (n + 7) / 8;
  if (r.remaining() != static_cast<std::size_t>(count) * width) throw DecodeError("challenge set size mismatch");
  ChallengeSet out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) out.push_back(Challenge::from_bytes(r.raw(width), n));
  r.expect_done();
  return out;
}

}  // namespace pufzk::puf
