#ifndef VBAR_RNG_HPP
#define VBAR_RNG_HPP

#include <cstdint>
#include <random>

namespace vbar {

// Thin wrapper over mt19937_64 with an explicit bits-to-double mapping.
// std::uniform_real_distribution is implementation-defined, which would break
// the byte-identical-report guarantee across standard libraries; this mapping
// is pinned.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform in [-1, 1).
  double symmetric() { return 2.0 * uniform01() - 1.0; }

  /// Integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform01() * static_cast<double>(hi - lo + 1));
  }

private:
  std::mt19937_64 eng_;
};

} // namespace vbar

#endif
