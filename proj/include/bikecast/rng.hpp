#ifndef BIKECAST_RNG_HPP
#define BIKECAST_RNG_HPP

#include <cstdint>
#include <vector>

namespace bikecast {

// Deterministic generator with stable output across platforms and
// standard-library versions. std::uniform_*_distribution is not
// implementation-stable, so bounded draws are done by hand here;
// fitted models must be reproducible from (data, params, seed) alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). The modulo bias is < 2^-53 for any n used here.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller on the stable uniform source.
  double next_normal();

  // First k elements of a partial Fisher-Yates shuffle of 0..n-1.
  void sample_without_replacement(std::uint64_t n, std::uint64_t k, std::vector<int>& out);

  int next_poisson(double lambda);

  // Derives an independent stream, e.g. per tree or per station.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ull + (stream << 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

} // namespace bikecast

#endif
