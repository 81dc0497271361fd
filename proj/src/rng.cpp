#include "marrt/rng.hpp"

namespace marrt {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kSplitSalt = 0xD1B54A32D192ED03ULL;
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  // smallest multiple-of-n boundary; values below it are rejected
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % n;
  }
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool Rng::chance(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01() < p;
}

Rng Rng::split(std::uint64_t stream_id) const {
  return Rng(mix64(key_ ^ mix64(stream_id + kSplitSalt)));
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a,
                          std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = mix64(parent + kGamma);
  h = mix64(h ^ (a + kSplitSalt));
  h = mix64(h ^ (b + 2 * kSplitSalt));
  h = mix64(h ^ (c + 3 * kSplitSalt));
  return h;
}

}  // namespace marrt
