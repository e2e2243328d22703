#include "bikecast/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

#include "bikecast/csv.hpp"
#include "bikecast/model.hpp"
#include "bikecast/parallel.hpp"

namespace bikecast {

FoldAssignment kfold_split(size_t n, int k, std::uint64_t seed, FoldMode mode) {
  if (k < 2 || n < static_cast<size_t>(k)) {
    throw Error(errc::too_few_rows,
                "cannot split " + std::to_string(n) + " rows into " + std::to_string(k) + " folds");
  }
  FoldAssignment folds;
  folds.n = n;
  folds.k = k;
  folds.seed = seed;
  folds.mode = mode;
  folds.fold_of.resize(n);
  if (mode == FoldMode::blocked) {
    // k contiguous blocks with sizes differing by at most one.
    size_t base = n / static_cast<size_t>(k);
    size_t extra = n % static_cast<size_t>(k);
    size_t pos = 0;
    for (int f = 0; f < k; ++f) {
      size_t len = base + (static_cast<size_t>(f) < extra ? 1 : 0);
      for (size_t i = 0; i < len; ++i) folds.fold_of[pos++] = f;
    }
  } else {
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    for (size_t i = n; i > 1; --i) {
      size_t j = static_cast<size_t>(rng.next_below(i));
      std::swap(perm[i - 1], perm[j]);
    }
    for (size_t i = 0; i < n; ++i) {
      folds.fold_of[perm[i]] = static_cast<int>(i % static_cast<size_t>(k));
    }
  }
  return folds;
}

double mae_bikes(std::span<const double> predictions_log, std::span<const double> actual_bikes) {
  if (predictions_log.size() != actual_bikes.size()) {
    throw Error(errc::length_mismatch, "prediction and actual lengths differ");
  }
  if (predictions_log.empty()) throw Error(errc::length_mismatch, "no rows to score");
  double acc = 0.0;
  for (size_t i = 0; i < predictions_log.size(); ++i) {
    acc += std::abs(from_log_space(predictions_log[i]) - actual_bikes[i]);
  }
  return acc / static_cast<double>(predictions_log.size());
}

double max_ae_bikes(std::span<const double> predictions_log, std::span<const double> actual_bikes) {
  if (predictions_log.size() != actual_bikes.size()) {
    throw Error(errc::length_mismatch, "prediction and actual lengths differ");
  }
  if (predictions_log.empty()) throw Error(errc::length_mismatch, "no rows to score");
  double worst = 0.0;
  for (size_t i = 0; i < predictions_log.size(); ++i) {
    worst = std::max(worst, std::abs(from_log_space(predictions_log[i]) - actual_bikes[i]));
  }
  return worst;
}

MaeSummary mae_bikes(const std::vector<std::vector<double>>& predictions_log,
                     const std::vector<std::vector<double>>& actual_bikes) {
  if (predictions_log.size() != actual_bikes.size()) {
    throw Error(errc::length_mismatch, "station counts differ");
  }
  MaeSummary summary;
  summary.per_station.reserve(predictions_log.size());
  for (size_t s = 0; s < predictions_log.size(); ++s) {
    summary.per_station.push_back(mae_bikes(predictions_log[s], actual_bikes[s]));
  }
  summary.overall =
      std::accumulate(summary.per_station.begin(), summary.per_station.end(), 0.0) /
      static_cast<double>(summary.per_station.size());
  return summary;
}

namespace {

Model fit_univariate(const Matrix& X, std::span<const double> y, const HyperParams& hp,
                     std::span<const std::string> names, int jobs) {
  switch (hp.kind) {
    case LearnerKind::regression_tree: {
      TreeParams tp{hp.max_depth, hp.min_samples_leaf};
      return fit_regression_tree(X, y, tp, all_features_sampler(), hp.seed);
    }
    case LearnerKind::random_forest:
      return fit_random_forest(X, y, hp, names, jobs);
    case LearnerKind::lsboost:
      return fit_lsboost(X, y, hp, names);
    case LearnerKind::plsr:
      throw Error(errc::config_invalid, "plsr is a region-level learner");
  }
  throw Error(errc::config_invalid, "unknown learner kind");
}

// Held-out log-space predictions for every row of one station dataset.
std::vector<double> cv_predictions(const StationDataset& ds, const CvConfig& cv, int jobs) {
  FoldAssignment folds =
      kfold_split(ds.X.rows, cv.k_folds, Rng::mix(cv.seed, static_cast<std::uint64_t>(ds.station_id)),
                  cv.fold_mode);
  std::vector<double> out(ds.X.rows, 0.0);
  for (int f = 0; f < cv.k_folds; ++f) {
    size_t n_train = 0;
    for (size_t r = 0; r < ds.X.rows; ++r) n_train += folds.fold_of[r] != f;
    if (n_train == 0) continue;
    Matrix x_train(n_train, ds.X.cols);
    std::vector<double> y_train(n_train);
    std::vector<size_t> test_rows;
    size_t w = 0;
    for (size_t r = 0; r < ds.X.rows; ++r) {
      if (folds.fold_of[r] != f) {
        std::copy(ds.X.row(r).begin(), ds.X.row(r).end(), x_train.row(w).begin());
        y_train[w] = ds.y[r];
        ++w;
      } else {
        test_rows.push_back(r);
      }
    }
    Matrix x_test(test_rows.size(), ds.X.cols);
    for (size_t i = 0; i < test_rows.size(); ++i) {
      std::copy(ds.X.row(test_rows[i]).begin(), ds.X.row(test_rows[i]).end(),
                x_test.row(i).begin());
    }
    Model model = fit_univariate(x_train, y_train, cv.hp, ds.feature_names, jobs);
    Matrix pred = predict(model, x_test);
    for (size_t i = 0; i < test_rows.size(); ++i) out[test_rows[i]] = pred.at(i, 0);
  }
  return out;
}

double wall_seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

EvalReport evaluate_stations(std::span<const StationDataset> datasets, const CvConfig& cv,
                             int jobs) {
  if (datasets.empty()) throw Error(errc::empty_dataset, "no station datasets");
  auto start = std::chrono::steady_clock::now();

  EvalReport report;
  report.learner = learner_name(cv.hp.kind);
  report.horizon_minutes = datasets.front().horizon_minutes;
  report.memory = datasets.front().memory;
  report.params = cv.hp;
  report.k_folds = cv.k_folds;
  report.fold_mode = cv.fold_mode;
  report.seed = cv.seed;
  report.stations.resize(datasets.size());

  parallel_for(datasets.size(), jobs, [&](size_t s) {
    const StationDataset& ds = datasets[s];
    std::vector<double> pred = cv_predictions(ds, cv, 1);
    std::vector<double> actual(ds.y.size());
    for (size_t i = 0; i < ds.y.size(); ++i) actual[i] = std::expm1(ds.y[i]);
    report.stations[s] =
        {ds.station_id, mae_bikes(pred, actual), max_ae_bikes(pred, actual), ds.y.size()};
  });

  double acc = 0.0;
  for (const auto& s : report.stations) acc += s.mae;
  report.overall_mae = acc / static_cast<double>(report.stations.size());
  report.wall_seconds = wall_seconds_since(start);
  return report;
}

EvalReport evaluate_regions(std::span<const RegionDataset> datasets, const CvConfig& cv, int jobs) {
  if (datasets.empty()) throw Error(errc::empty_dataset, "no region datasets");
  auto start = std::chrono::steady_clock::now();

  EvalReport report;
  report.learner = learner_name(LearnerKind::plsr);
  report.horizon_minutes = datasets.front().horizon_minutes;
  report.params = cv.hp;
  report.k_folds = cv.k_folds;
  report.fold_mode = cv.fold_mode;
  report.seed = cv.seed;

  std::vector<std::vector<StationScore>> region_scores(datasets.size());
  parallel_for(datasets.size(), jobs, [&](size_t ri) {
    const RegionDataset& ds = datasets[ri];
    FoldAssignment folds = kfold_split(
        ds.X.rows, cv.k_folds, Rng::mix(cv.seed, static_cast<std::uint64_t>(ds.region)),
        cv.fold_mode);
    Matrix pred_all(ds.X.rows, ds.Y.cols);
    for (int f = 0; f < cv.k_folds; ++f) {
      size_t n_train = 0;
      for (size_t r = 0; r < ds.X.rows; ++r) n_train += folds.fold_of[r] != f;
      Matrix x_train(n_train, ds.X.cols), y_train(n_train, ds.Y.cols);
      std::vector<size_t> test_rows;
      size_t w = 0;
      for (size_t r = 0; r < ds.X.rows; ++r) {
        if (folds.fold_of[r] != f) {
          std::copy(ds.X.row(r).begin(), ds.X.row(r).end(), x_train.row(w).begin());
          std::copy(ds.Y.row(r).begin(), ds.Y.row(r).end(), y_train.row(w).begin());
          ++w;
        } else {
          test_rows.push_back(r);
        }
      }
      int a = cv.hp.n_components;
      if (a <= 0) {
        a = select_plsr_components(x_train, y_train,
                                   static_cast<int>(std::min<size_t>(20, x_train.cols)), 5,
                                   Rng::mix(cv.seed, 0x504c5352u + static_cast<unsigned>(f)));
      }
      PLSRModel model = fit_plsr(x_train, y_train, a);
      Matrix x_test(test_rows.size(), ds.X.cols);
      for (size_t i = 0; i < test_rows.size(); ++i) {
        std::copy(ds.X.row(test_rows[i]).begin(), ds.X.row(test_rows[i]).end(),
                  x_test.row(i).begin());
      }
      Matrix pred;
      model.predict(x_test, pred);
      for (size_t i = 0; i < test_rows.size(); ++i) {
        for (size_t j = 0; j < ds.Y.cols; ++j) pred_all.at(test_rows[i], j) = pred.at(i, j);
      }
    }

    std::vector<StationScore>& scores = region_scores[ri];
    scores.resize(ds.member_stations.size());
    std::vector<double> pred_col(ds.X.rows), actual_col(ds.X.rows);
    for (size_t j = 0; j < ds.member_stations.size(); ++j) {
      for (size_t r = 0; r < ds.X.rows; ++r) {
        pred_col[r] = pred_all.at(r, j);
        actual_col[r] = std::expm1(ds.Y.at(r, j));
      }
      scores[j] = {ds.member_stations[j], mae_bikes(pred_col, actual_col),
                   max_ae_bikes(pred_col, actual_col), ds.X.rows};
    }
  });

  for (auto& scores : region_scores) {
    report.stations.insert(report.stations.end(), scores.begin(), scores.end());
  }
  std::sort(report.stations.begin(), report.stations.end(),
            [](const StationScore& a, const StationScore& b) { return a.station_id < b.station_id; });
  double acc = 0.0;
  for (const auto& s : report.stations) acc += s.mae;
  report.overall_mae = acc / static_cast<double>(report.stations.size());
  report.wall_seconds = wall_seconds_since(start);
  return report;
}

std::vector<double> evaluate_ensemble_curve(std::span<const StationDataset> datasets,
                                            const CvConfig& cv, std::span<const int> sizes,
                                            int jobs) {
  if (datasets.empty()) throw Error(errc::empty_dataset, "no station datasets");
  if (sizes.empty()) throw Error(errc::config_invalid, "empty size grid");
  int max_size = *std::max_element(sizes.begin(), sizes.end());

  // per size, per station: MAE
  std::vector<std::vector<double>> mae(sizes.size(), std::vector<double>(datasets.size(), 0.0));
  parallel_for(datasets.size(), jobs, [&](size_t s) {
    const StationDataset& ds = datasets[s];
    FoldAssignment folds = kfold_split(
        ds.X.rows, cv.k_folds, Rng::mix(cv.seed, static_cast<std::uint64_t>(ds.station_id)),
        cv.fold_mode);
    // predictions per size grid point
    std::vector<std::vector<double>> pred(sizes.size(), std::vector<double>(ds.X.rows, 0.0));
    for (int f = 0; f < cv.k_folds; ++f) {
      size_t n_train = 0;
      for (size_t r = 0; r < ds.X.rows; ++r) n_train += folds.fold_of[r] != f;
      Matrix x_train(n_train, ds.X.cols);
      std::vector<double> y_train(n_train);
      std::vector<size_t> test_rows;
      size_t w = 0;
      for (size_t r = 0; r < ds.X.rows; ++r) {
        if (folds.fold_of[r] != f) {
          std::copy(ds.X.row(r).begin(), ds.X.row(r).end(), x_train.row(w).begin());
          y_train[w] = ds.y[r];
          ++w;
        } else {
          test_rows.push_back(r);
        }
      }
      Matrix x_test(test_rows.size(), ds.X.cols);
      for (size_t i = 0; i < test_rows.size(); ++i) {
        std::copy(ds.X.row(test_rows[i]).begin(), ds.X.row(test_rows[i]).end(),
                  x_test.row(i).begin());
      }

      HyperParams hp = cv.hp;
      hp.n_trees = max_size;
      std::vector<double> buf(test_rows.size());
      if (hp.kind == LearnerKind::random_forest) {
        ForestModel model = fit_random_forest(x_train, y_train, hp, ds.feature_names, 1);
        for (size_t gi = 0; gi < sizes.size(); ++gi) {
          model.predict(x_test, buf, static_cast<size_t>(sizes[gi]));
          for (size_t i = 0; i < test_rows.size(); ++i) pred[gi][test_rows[i]] = buf[i];
        }
      } else if (hp.kind == LearnerKind::lsboost) {
        BoostModel model = fit_lsboost(x_train, y_train, hp, ds.feature_names);
        for (size_t gi = 0; gi < sizes.size(); ++gi) {
          model.predict(x_test, buf, static_cast<size_t>(sizes[gi]));
          for (size_t i = 0; i < test_rows.size(); ++i) pred[gi][test_rows[i]] = buf[i];
        }
      } else {
        throw Error(errc::config_invalid, "ensemble curve needs rf or lsboost");
      }
    }
    std::vector<double> actual(ds.y.size());
    for (size_t i = 0; i < ds.y.size(); ++i) actual[i] = std::expm1(ds.y[i]);
    for (size_t gi = 0; gi < sizes.size(); ++gi) mae[gi][s] = mae_bikes(pred[gi], actual);
  });

  std::vector<double> curve(sizes.size(), 0.0);
  for (size_t gi = 0; gi < sizes.size(); ++gi) {
    curve[gi] = std::accumulate(mae[gi].begin(), mae[gi].end(), 0.0) /
                static_cast<double>(datasets.size());
  }
  return curve;
}

SweepResult run_sweep(const SweepRequest& request, const CvConfig& cv, const DataBundle& data,
                      int jobs) {
  if (request.grid.empty()) throw Error(errc::config_invalid, "empty sweep grid");
  if (!data.grid || !data.weather) throw Error(errc::config_invalid, "sweep needs grid and weather");

  SweepResult result;
  result.axis = request.axis;
  result.grid = request.grid;

  auto evaluate_at = [&](const FeatureOptions& options) {
    if (cv.hp.kind == LearnerKind::plsr) {
      auto datasets = build_region_datasets(*data.grid, data.partition, *data.weather, options, jobs);
      return evaluate_regions(datasets, cv, jobs);
    }
    auto datasets = build_station_datasets(*data.grid, data.neighbors, *data.weather, options, jobs);
    return evaluate_stations(datasets, cv, jobs);
  };

  if (request.axis == "horizon") {
    std::vector<double> primary;
    std::map<std::string, std::vector<double>> tree_rows;
    for (int minutes : request.grid) {
      FeatureOptions options = data.options;
      options.horizon_minutes = minutes;
      EvalReport report = evaluate_at(options);
      primary.push_back(report.overall_mae);
      result.reports.push_back(std::move(report));
      if (!request.tree_curves.empty() && cv.hp.kind != LearnerKind::plsr) {
        auto datasets =
            build_station_datasets(*data.grid, data.neighbors, *data.weather, options, jobs);
        auto curve = evaluate_ensemble_curve(datasets, cv, request.tree_curves, jobs);
        for (size_t i = 0; i < request.tree_curves.size(); ++i) {
          tree_rows["trees=" + std::to_string(request.tree_curves[i])].push_back(curve[i]);
        }
      }
    }
    result.curves["mae"] = std::move(primary);
    for (auto& [label, row] : tree_rows) result.curves[label] = std::move(row);
  } else if (request.axis == "trees") {
    auto datasets =
        build_station_datasets(*data.grid, data.neighbors, *data.weather, data.options, jobs);
    result.curves["mae"] = evaluate_ensemble_curve(datasets, cv, request.grid, jobs);
  } else if (request.axis == "memory") {
    std::vector<double> primary;
    for (int m : request.grid) {
      FeatureOptions options = data.options;
      options.memory = m;
      EvalReport report = evaluate_at(options);
      primary.push_back(report.overall_mae);
      result.reports.push_back(std::move(report));
    }
    result.curves["mae"] = std::move(primary);
  } else {
    throw Error(errc::config_invalid, "unknown sweep axis '" + request.axis + "'");
  }
  return result;
}

void write_report_csv(const EvalReport& report, std::ostream& out) {
  out << "station_id,rows,mae_bikes,max_ae_bikes\n";
  for (const auto& s : report.stations) {
    out << s.station_id << ',' << s.rows << ',' << format_double(s.mae) << ','
        << format_double(s.max_ae) << '\n';
  }
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  out << sweep.axis;
  for (const auto& [label, curve] : sweep.curves) out << ',' << label;
  out << '\n';
  for (size_t i = 0; i < sweep.grid.size(); ++i) {
    out << sweep.grid[i];
    for (const auto& [label, curve] : sweep.curves) out << ',' << format_double(curve[i]);
    out << '\n';
  }
}

} // namespace bikecast
