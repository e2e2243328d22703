#include "bikecast/lsboost.hpp"

#include <cmath>

#include "bikecast/error.hpp"

namespace bikecast {

void BoostModel::predict(const Matrix& X, std::span<double> out, size_t n_stages) const {
  if (static_cast<int>(X.cols) != n_features) {
    throw Error(errc::dimension_mismatch, "expected " + std::to_string(n_features) +
                                              " features, got " + std::to_string(X.cols));
  }
  size_t use = std::min(n_stages, stages.size());
  for (size_t r = 0; r < X.rows; ++r) {
    auto row = X.row(r);
    double value = f0;
    for (size_t s = 0; s < use; ++s) {
      if (stages[s].inert) continue;
      value += shrinkage * stages[s].beta * stages[s].tree.predict_row(row);
    }
    out[r] = value;
  }
}

BoostModel fit_lsboost(const Matrix& X, std::span<const double> y, const HyperParams& params,
                       std::span<const std::string> feature_names) {
  if (X.rows == 0) throw Error(errc::empty_dataset, "no training rows");
  if (y.size() != X.rows) throw Error(errc::dimension_mismatch, "y length != row count");
  if (params.n_trees < 1) throw Error(errc::config_invalid, "n_stages must be >= 1");
  if (!(params.shrinkage > 0.0 && params.shrinkage <= 1.0)) {
    throw Error(errc::config_invalid, "shrinkage must be in (0, 1]");
  }

  BoostModel model;
  model.params = params;
  model.shrinkage = params.shrinkage;
  model.n_features = static_cast<int>(X.cols);
  model.feature_names.assign(feature_names.begin(), feature_names.end());

  double sum = 0.0;
  for (size_t i = 0; i < y.size(); ++i) sum += y[i];
  model.f0 = sum / static_cast<double>(y.size());

  std::vector<double> residual(y.size());
  for (size_t i = 0; i < y.size(); ++i) residual[i] = y[i] - model.f0;

  TreeFitter fitter(X);
  const TreeParams tree_params{params.max_depth, params.min_samples_leaf};
  const FeatureSampler sampler = all_features_sampler();
  Rng rng(params.seed);

  std::vector<double> h(y.size());
  model.stages.reserve(static_cast<size_t>(params.n_trees));
  for (int stage = 0; stage < params.n_trees; ++stage) {
    BoostStage s;
    s.tree = fitter.fit(residual, tree_params, sampler, rng, {}, &h);

    double rh = 0.0;
    double hh = 0.0;
    for (size_t i = 0; i < h.size(); ++i) {
      rh += residual[i] * h[i];
      hh += h[i] * h[i];
    }
    if (hh == 0.0) {
      s.beta = 0.0;
      s.inert = true;
    } else {
      s.beta = rh / hh;
      double step = params.shrinkage * s.beta;
      for (size_t i = 0; i < h.size(); ++i) residual[i] -= step * h[i];
    }
    model.stages.push_back(std::move(s));
  }
  return model;
}

} // namespace bikecast
