#ifndef ENSNAP_RNG_HPP
#define ENSNAP_RNG_HPP

#include <cstdint>
#include <random>

namespace ensnap {

/// SplitMix64 mixing step. Used as the seed-derivation function everywhere:
/// replication k of master seed s uses derive_seed(s, k), so any replication
/// can be rerun in isolation.
std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// mt19937_64 with pinned output transforms. The standard distributions are
/// implementation-defined, so uniform/normal/index are built here from raw
/// 64-bit draws and produce the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0,1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0,1), never returns an exact endpoint.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the pair is cached, two uniforms per pair.
  double normal();

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ensnap

#endif
