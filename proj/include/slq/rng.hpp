#pragma once

#include <cmath>
#include <cstdint>

namespace slq {

namespace detail {

// SplitMix64 finalizer; full-period bijection on 64-bit states.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

// Counter-based generator built on SplitMix64. Streams are derived from
// (seed, stream id) alone, so sample i can be generated on any thread in any
// order and still produce identical output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(detail::mix64(seed + kGolden)) {}

  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed);
    r.state_ = detail::mix64(r.state_ ^ detail::mix64(stream + kGolden));
    return r;
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return detail::mix64(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // +1 or -1 with equal probability.
  double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  // Standard normal via the Marsaglia polar method.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    have_spare_ = true;
    return u * scale;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stream-id helpers: high bits tag the purpose of the stream so that, say,
// sample vectors and sketch columns never collide even under the same seed.
namespace stream {

inline constexpr std::uint64_t tagged(std::uint64_t domain, std::uint64_t i) {
  return (domain << 48) + i;
}

inline constexpr std::uint64_t kSamples = 0;
inline constexpr std::uint64_t kSketch = 1;
inline constexpr std::uint64_t kRemainder = 2;
inline constexpr std::uint64_t kPowerIteration = 3;
inline constexpr std::uint64_t kConstruction = 4;

}  // namespace stream

}  // namespace slq
