#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

namespace qrwa {

// SplitMix64 (Steele, Lea, Flood; same generator as Java's SplittableRandom
// and the seeding helper recommended for xoshiro).  Chosen because it is a
// published, trivially portable 64-bit generator: every platform produces the
// same stream for the same seed, which the reproducibility guarantees of this
// project depend on.  Statistical quality is more than sufficient for
// simulation sampling at our scale.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits (exactly representable doubles).
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, bound) by rejection sampling.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Inclusive integer range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    next_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform real in [lo, hi).
  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

 private:
  std::uint64_t state_;
};

namespace detail {
inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Derives a child seed from a master seed plus a role tag and indices by
// chaining the SplitMix64 finalizer.  Every independently-seeded random
// stream in the simulator (topology #t, request sequence #(t, r, ...)) gets
// its seed this way, so streams never overlap by construction and the whole
// experiment is a pure function of one master seed.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL;
  for (std::uint64_t p : parts) {
    h = detail::splitmix64_finalize(h + 0x9E3779B97F4A7C15ULL + p);
  }
  return h;
}

// Role tags for derive_seed.  Values are arbitrary but frozen: changing them
// changes every simulated trajectory.
enum SeedTag : std::uint64_t {
  kSeedTagTopology = 0x546F706Full,  // "Topo"
  kSeedTagRequests = 0x52657173ull,  // "Reqs"
};

// In-place Fisher-Yates shuffle (descending index walk).
template <typename T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace qrwa
