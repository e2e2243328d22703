#ifndef BIKECAST_TREE_HPP
#define BIKECAST_TREE_HPP

#include <functional>
#include <span>
#include <vector>

#include "bikecast/hyperparams.hpp"
#include "bikecast/matrix.hpp"
#include "bikecast/rng.hpp"

namespace bikecast {

struct TreeNode {
  int feature = -1; // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0; // mean of the training targets routed here
  double sse = 0.0;   // sum of squared deviations of those targets
  int n_samples = 0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct TreeParams {
  int max_depth = 30;
  int min_samples_leaf = 5;

  bool operator==(const TreeParams&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes; // nodes[0] is the root
  int n_features = 0;
  TreeParams params;

  double predict_row(std::span<const double> x) const;
  void predict(const Matrix& X, std::span<double> out) const;

  // Total child SSE of the root split (the root's own SSE when the tree
  // is a single leaf). Node SSEs are direct two-pass sums, so this is
  // comparable bit-for-bit with an independent recomputation over the
  // same row sequence.
  double root_split_sse() const;

  bool operator==(const RegressionTree&) const = default;
};

// Fills `out` with the candidate feature indices for one split, in
// ascending order (ties in split quality break toward the first
// candidate, so the order is part of the contract).
using FeatureSampler = std::function<void(Rng&, int n_features, std::vector<int>&)>;

FeatureSampler all_features_sampler();
FeatureSampler mtry_sampler(int mtry);

// Grows a CART regression tree: every split minimizes total child SSE
// over midpoint thresholds between consecutive distinct values of the
// sampled features; growth stops at max_depth, min_samples_leaf, or
// zero SSE gain.
RegressionTree fit_regression_tree(const Matrix& X, std::span<const double> y,
                                   const TreeParams& params = {},
                                   const FeatureSampler& sampler = all_features_sampler(),
                                   std::uint64_t seed = 0);

// Reusable fitter: the per-feature sort of X is built once and shared
// across trees over the same rows (forest trees, boosting stages).
class TreeFitter {
 public:
  explicit TreeFitter(const Matrix& X);

  // bootstrap_counts: per-row multiplicity (empty = every row once).
  // train_predictions, when given, receives the fitted value for every
  // row with nonzero multiplicity (others are left untouched).
  RegressionTree fit(std::span<const double> y, const TreeParams& params,
                     const FeatureSampler& sampler, Rng& rng,
                     std::span<const int> bootstrap_counts = {},
                     std::vector<double>* train_predictions = nullptr) const;

  size_t n_rows() const { return n_rows_; }
  int n_features() const { return n_features_; }

 private:
  size_t n_rows_ = 0;
  int n_features_ = 0;
  std::vector<double> columns_;   // column-major copy of X
  std::vector<int> sorted_rows_;  // per feature: row ids ordered by value
};

} // namespace bikecast

#endif
