#include "bikecast/forest.hpp"

#include <cmath>

#include "bikecast/error.hpp"
#include "bikecast/parallel.hpp"

namespace bikecast {

void ForestModel::predict(const Matrix& X, std::span<double> out, size_t n_trees) const {
  if (trees.empty()) throw Error(errc::unfitted_model, "forest has no trees");
  if (static_cast<int>(X.cols) != n_features) {
    throw Error(errc::dimension_mismatch, "expected " + std::to_string(n_features) +
                                              " features, got " + std::to_string(X.cols));
  }
  size_t use = n_trees == 0 ? trees.size() : std::min(n_trees, trees.size());
  for (size_t r = 0; r < X.rows; ++r) {
    auto row = X.row(r);
    double sum = 0.0;
    for (size_t t = 0; t < use; ++t) sum += trees[t].predict_row(row);
    out[r] = sum / static_cast<double>(use);
  }
}

ForestModel fit_random_forest(const Matrix& X, std::span<const double> y,
                              const HyperParams& params, std::span<const std::string> feature_names,
                              int jobs) {
  if (X.rows == 0) throw Error(errc::empty_dataset, "no training rows");
  if (params.n_trees < 1) throw Error(errc::config_invalid, "n_trees must be >= 1");

  ForestModel forest;
  forest.params = params;
  forest.n_features = static_cast<int>(X.cols);
  forest.feature_names.assign(feature_names.begin(), feature_names.end());
  forest.trees.resize(static_cast<size_t>(params.n_trees));

  const int p = static_cast<int>(X.cols);
  int mtry = params.mtry > 0 ? std::min(params.mtry, p) : (p + 2) / 3; // ceil(p/3)
  const FeatureSampler sampler = mtry >= p ? all_features_sampler() : mtry_sampler(mtry);
  const TreeParams tree_params{params.max_depth, params.min_samples_leaf};

  TreeFitter fitter(X);
  parallel_for(forest.trees.size(), jobs, [&](size_t t) {
    Rng rng(Rng::mix(params.seed, static_cast<std::uint64_t>(t)));
    if (params.bootstrap) {
      std::vector<int> counts(X.rows, 0);
      for (size_t i = 0; i < X.rows; ++i) {
        ++counts[static_cast<size_t>(rng.next_below(X.rows))];
      }
      forest.trees[t] = fitter.fit(y, tree_params, sampler, rng, counts);
    } else {
      forest.trees[t] = fitter.fit(y, tree_params, sampler, rng);
    }
  });
  return forest;
}

std::map<std::string, double> feature_importance(const ForestModel& forest) {
  if (forest.trees.empty()) throw Error(errc::unfitted_model, "forest has no trees");

  std::vector<double> gain(static_cast<size_t>(forest.n_features), 0.0);
  for (const auto& tree : forest.trees) {
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      double reduction = node.sse - tree.nodes[static_cast<size_t>(node.left)].sse -
                         tree.nodes[static_cast<size_t>(node.right)].sse;
      if (reduction > 0.0) gain[static_cast<size_t>(node.feature)] += reduction;
    }
  }
  double total = 0.0;
  for (double g : gain) total += g;

  std::map<std::string, double> importance;
  for (size_t f = 0; f < gain.size(); ++f) {
    std::string name = f < forest.feature_names.size() ? forest.feature_names[f]
                                                       : "f" + std::to_string(f);
    importance[name] = total > 0.0 ? gain[f] / total : 0.0;
  }
  return importance;
}

} // namespace bikecast
