#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace gcs {

/// Seeded generator whose draws are identical on every platform: the
/// standard library fixes mt19937_64's output sequence but not the behavior
/// of its distributions, so the conversions are done here.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n > 0, without modulo bias.
  std::uint64_t Below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("PortableRng::Below: empty range");
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = kMax - kMax % n;
    while (true) {
      const std::uint64_t x = engine_();
      if (x < limit) return x % n;
    }
  }

  /// Fisher-Yates shuffle driven by Below.
  template <typename Container>
  void Shuffle(Container& items) {
    for (std::uint64_t i = items.size(); i > 1; --i) {
      using std::swap;
      swap(items[i - 1], items[Below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gcs
