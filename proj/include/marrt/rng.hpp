#pragma once

#include <cstdint>

namespace marrt {

// Counter-based SplitMix64 stream ("smx64-ctr", version 1).
//
//   output(k) = mix64(key + k * 0x9E3779B97F4A7C15), k = 1, 2, ...
//   split(id) = Rng(mix64(key ^ mix64(id + 0xD1B54A32D192ED03)))
//
// mix64 is the SplitMix64 finalizer. Integer ranges use rejection sampling on
// the full 64-bit output and reals take the top 53 bits, so a seed produces
// the same stream on every platform and compiler.
class Rng {
 public:
  static constexpr const char* kName = "smx64-ctr";
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed = 0) : key_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  // Uniform in [0, 1).
  double uniform01();

  // Bernoulli(p) without consuming the stream when p is 0 or 1.
  bool chance(double p);

  Rng split(std::uint64_t stream_id) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

// Deterministic child seed from a parent seed and a path of integers.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

}  // namespace marrt
