#ifndef BIKECAST_HYPERPARAMS_HPP
#define BIKECAST_HYPERPARAMS_HPP

#include <cstdint>
#include <string>

namespace bikecast {

enum class LearnerKind { regression_tree, random_forest, lsboost, plsr };

const char* learner_name(LearnerKind kind);
LearnerKind learner_from_name(const std::string& name);

struct HyperParams {
  LearnerKind kind = LearnerKind::random_forest;
  int n_trees = 140;        // forest trees / boosting stages
  int mtry = 0;             // features per split; 0 = ceil(p/3)
  int max_depth = 30;
  int min_samples_leaf = 5;
  double shrinkage = 0.1;   // boosting learning rate, (0, 1]
  int n_components = 0;     // PLSR; 0 = choose by inner 5-fold CV
  bool bootstrap = true;
  std::uint64_t seed = 1;

  bool operator==(const HyperParams&) const = default;
};

} // namespace bikecast

#endif
