#ifndef BIKECAST_FOREST_HPP
#define BIKECAST_FOREST_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bikecast/hyperparams.hpp"
#include "bikecast/matrix.hpp"
#include "bikecast/tree.hpp"

namespace bikecast {

struct ForestModel {
  std::vector<RegressionTree> trees;
  HyperParams params;
  std::vector<std::string> feature_names;
  int n_features = 0;

  // Mean over the first n_trees trees (0 = all). A prefix of a fitted
  // forest is bit-identical to a forest fitted with that n_trees and
  // the same seed: tree t draws from a stream keyed by (seed, t).
  void predict(const Matrix& X, std::span<double> out, size_t n_trees = 0) const;

  bool operator==(const ForestModel&) const = default;
};

ForestModel fit_random_forest(const Matrix& X, std::span<const double> y, const HyperParams& params,
                              std::span<const std::string> feature_names = {}, int jobs = 1);

// Split-gain importance: total SSE reduction per feature over all
// trees, normalized to sum to one.
std::map<std::string, double> feature_importance(const ForestModel& forest);

} // namespace bikecast

#endif
