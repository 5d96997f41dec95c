#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>
#include <random>

namespace hdx {

/** Thrown when an enumeration or size cap is exceeded (CLI exit code 3). */
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/** FNV-1a 64-bit hash, used for content hashes of canonical JSON. */
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v);

/**
 * Deterministic RNG wrapper. mt19937_64 output is specified by the
 * standard, and all derived draws below avoid std::uniform_*_distribution
 * (whose mapping is implementation defined), so seeded runs reproduce
 * bit for bit across platforms.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t u64() { return eng_(); }

  /** Uniform-ish draw in [0, n). Modulo bias is irrelevant here; determinism is not. */
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    return eng_() % n;
  }

  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /** Bernoulli(p) decided on the top 32 bits, stable for a given double p. */
  bool chance(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    const std::uint64_t threshold =
        static_cast<std::uint64_t>(p * 4294967296.0);
    return (eng_() >> 32) < threshold;
  }

  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  template <class V>
  void shuffle(V& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

/** Environment-configurable worker count (HDX_THREADS), default 1. */
int worker_count();

/**
 * Round to `sig` significant decimal digits. Reports round floats before
 * serialization so content hashes ignore last-bit noise between runs.
 */
double round_sig(double v, int sig = 12);

}  // namespace hdx
