#ifndef BIKECAST_PLSR_HPP
#define BIKECAST_PLSR_HPP

#include <cstdint>
#include <vector>

#include "bikecast/matrix.hpp"

namespace bikecast {

// Two-block latent-component regression. Components are extracted by
// the iterative NIPALS procedure with X-deflation; the per-component
// weights/loadings collapse into a single affine map for prediction:
// yhat = (x - x_mean) * coef + y_mean.
struct PLSRModel {
  int n_components = 0; // effective count (extraction may stop early)
  std::vector<double> x_mean;
  std::vector<double> y_mean;
  Matrix weights;    // p x A
  Matrix x_loadings; // p x A
  Matrix y_loadings; // q x A
  Matrix coef;       // p x q

  void predict(const Matrix& X, Matrix& out) const;

  bool operator==(const PLSRModel&) const = default;
};

PLSRModel fit_plsr(const Matrix& X, const Matrix& Y, int n_components, double tol = 1e-10,
                   int max_iter = 500);

// Component count by k-fold cross-validation over 1..max_components,
// minimizing held-out squared error; ties go to the smaller count.
int select_plsr_components(const Matrix& X, const Matrix& Y, int max_components, int k_folds,
                           std::uint64_t seed);

} // namespace bikecast

#endif
