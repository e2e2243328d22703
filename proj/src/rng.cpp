#include "bikecast/rng.hpp"

#include <cmath>

namespace bikecast {

double Rng::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 <= 1e-300) u1 = next_double();
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * 3.141592653589793 * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

void Rng::sample_without_replacement(std::uint64_t n, std::uint64_t k, std::vector<int>& out) {
  out.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) out[i] = static_cast<int>(i);
  if (k > n) k = n;
  for (std::uint64_t i = 0; i < k; ++i) {
    std::uint64_t j = i + next_below(n - i);
    std::swap(out[i], out[j]);
  }
  out.resize(k);
}

int Rng::next_poisson(double lambda) {
  if (lambda <= 0.0) return 0;
  if (lambda < 30.0) {
    // Knuth multiplication method.
    double limit = std::exp(-lambda);
    double p = 1.0;
    int k = 0;
    do {
      ++k;
      p *= next_double();
    } while (p > limit);
    return k - 1;
  }
  // Normal approximation for large rates; adequate for synthetic data.
  double v = lambda + std::sqrt(lambda) * next_normal();
  return v < 0.0 ? 0 : static_cast<int>(v + 0.5);
}

} // namespace bikecast
