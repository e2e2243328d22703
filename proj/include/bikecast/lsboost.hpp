#ifndef BIKECAST_LSBOOST_HPP
#define BIKECAST_LSBOOST_HPP

#include <span>
#include <string>
#include <vector>

#include "bikecast/hyperparams.hpp"
#include "bikecast/matrix.hpp"
#include "bikecast/tree.hpp"

namespace bikecast {

struct BoostStage {
  RegressionTree tree;
  double beta = 0.0; // stage coefficient from the normal equation
  bool inert = false; // degenerate stage: tree output identically zero

  bool operator==(const BoostStage&) const = default;
};

// Stagewise squared-loss boosting. Each stage fits a tree to the
// current residuals, solves the one-dimensional least-squares problem
// for its coefficient (sum(r*h) / sum(h*h)), and advances the
// cumulative output by shrinkage * beta * h.
struct BoostModel {
  double f0 = 0.0; // mean of the training targets
  std::vector<BoostStage> stages;
  double shrinkage = 0.1;
  HyperParams params;
  std::vector<std::string> feature_names;
  int n_features = 0;

  // Output after the first n_stages stages (npos = all); a prefix is
  // exactly the model that training would have produced with that
  // stage count.
  void predict(const Matrix& X, std::span<double> out,
               size_t n_stages = static_cast<size_t>(-1)) const;

  bool operator==(const BoostModel&) const = default;
};

BoostModel fit_lsboost(const Matrix& X, std::span<const double> y, const HyperParams& params,
                       std::span<const std::string> feature_names = {});

} // namespace bikecast

#endif
