#pragma once

#include <cstdint>

namespace autpert {

/// Splittable counter-based generator.  The n-th draw of a stream is a pure
/// function of (seed, stream, n), so results never depend on how work is
/// scheduled.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : seed_(seed), stream_(mix(stream + 0x9E3779B97F4A7C15ull)) {}

  /// Independent child stream; children with different keys never overlap.
  CounterRng split(std::uint64_t key) const { return CounterRng(seed_, mix(stream_ ^ mix(key + 0x632BE59BD9B4E019ull))); }

  std::uint64_t operator()() { return mix(mix(seed_ ^ stream_) + counter_++ * 0xD1B54A32D192ED03ull); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : (*this)() % n; }
  /// Standard normal via Box-Muller on two uniforms.
  double normal();

  std::uint64_t counter() const { return counter_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace autpert
