// Acceptance gates for the forecasting toolkit. Each criterion prints
// one PASS/FAIL line (with its wall time) and the binary exits nonzero
// if any enabled criterion fails.
//
// Scale criteria run against $BIKECAST_DATA_DIR when it points at the
// public dataset's four files; otherwise a deterministic synthetic
// fixture with the same schema and network shape is generated once
// under --fixture-dir and reused.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bikecast/datagen.hpp"
#include "bikecast/eval.hpp"
#include "bikecast/features.hpp"
#include "bikecast/graph.hpp"
#include "bikecast/grid.hpp"
#include "bikecast/model.hpp"
#include "bikecast/parse.hpp"
#include "bikecast/rng.hpp"
#include "oracles.hpp"

using namespace bikecast;
namespace fs = std::filesystem;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw CheckFailure(message);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// ---------------------------------------------------------------------
// Shared dataset fixture (synthetic unless BIKECAST_DATA_DIR is set).

struct Fixture {
  std::string dir;
  bool synthetic = true;

  std::optional<ParseResult<StatusRecord>> status;
  std::optional<TripParseResult> trips;
  std::optional<ParseResult<WeatherRecord>> weather;
  std::optional<ParseResult<StationMeta>> stations;
  std::optional<CleanResult> cleaned;
  std::optional<SnapshotGrid> desk_grid;
  std::vector<NeighborSet> desk_neighbors;
  std::map<int, std::string> station_zip;

  // results shared between criteria (same configuration)
  std::optional<double> desk_rf_mae_15;
  std::optional<double> desk_lsboost_mae_15;

  const ParseResult<StatusRecord>& load_status() {
    if (!status) {
      std::ifstream in(fs::path(dir) / "status.csv");
      require(bool(in), "cannot open status.csv under " + dir);
      status = parse_status(in);
      require(!status->records.empty(), "status.csv parsed to zero records");
    }
    return *status;
  }
  const TripParseResult& load_trips() {
    if (!trips) {
      std::ifstream in(fs::path(dir) / "trip.csv");
      require(bool(in), "cannot open trip.csv under " + dir);
      trips = parse_trips(in);
      require(!trips->records.empty(), "trip.csv parsed to zero records");
    }
    return *trips;
  }
  const ParseResult<WeatherRecord>& load_weather() {
    if (!weather) {
      std::ifstream in(fs::path(dir) / "weather.csv");
      require(bool(in), "cannot open weather.csv under " + dir);
      weather = parse_weather(in);
    }
    return *weather;
  }
  const ParseResult<StationMeta>& load_stations() {
    if (!stations) {
      std::ifstream in(fs::path(dir) / "station.csv");
      require(bool(in), "cannot open station.csv under " + dir);
      stations = parse_stations(in);
      for (const auto& s : stations->records) {
        static const std::map<std::string, std::string> zips = {
            {"San Francisco", "94107"}, {"San Jose", "95113"}, {"Redwood City", "94063"},
            {"Mountain View", "94041"}, {"Palo Alto", "94301"}};
        auto it = zips.find(s.city);
        require(it != zips.end(), "no zip known for city " + s.city);
        station_zip[s.station_id] = it->second;
      }
    }
    return *stations;
  }
  const CleanResult& load_cleaned() {
    if (!cleaned) {
      const auto& st = load_status();
      SnapshotGrid grid = resample_grid(st.records);
      cleaned = clean_stations(grid, 0.9);
    }
    return *cleaned;
  }
  // 10 downtown-San-Francisco stations over six months.
  const SnapshotGrid& load_desk_grid() {
    if (!desk_grid) {
      const CleanResult& clean = load_cleaned();
      std::vector<int> subset;
      for (int id = 41; id <= 60 && subset.size() < 10; ++id) {
        if (clean.grid.station_index(id) >= 0) subset.push_back(id);
      }
      require(subset.size() == 10, "fewer than 10 stations with ids 41..60 in the cleaned grid");
      timestamp_t from = to_timestamp({2014, 6, 1, 0, 0, 0});
      timestamp_t to = to_timestamp({2014, 12, 1, 0, 0, 0});
      desk_grid = restrict_grid(clean.grid, subset, from, to);

      const auto& trip_data = load_trips();
      TripAdjacency adjacency = build_adjacency(trip_data.records, desk_grid->stations);
      for (int id : desk_grid->stations) {
        desk_neighbors.push_back(top_k_neighbors(adjacency, id, 10));
      }
    }
    return *desk_grid;
  }

  std::vector<StationDataset> desk_datasets(int horizon_minutes, int memory) {
    const SnapshotGrid& grid = load_desk_grid();
    load_stations();
    WeatherIndex index(load_weather().records);
    FeatureOptions options;
    options.horizon_minutes = horizon_minutes;
    options.memory = memory;
    options.min_rows = 100;
    options.station_zip = station_zip;
    return build_station_datasets(grid, desk_neighbors, index, options);
  }
};

Fixture g_fixture;

void prepare_fixture(const std::string& fixture_dir) {
  if (const char* env = std::getenv("BIKECAST_DATA_DIR")) {
    g_fixture.dir = env;
    g_fixture.synthetic = false;
    std::cout << "data source: BIKECAST_DATA_DIR=" << env << "\n";
    return;
  }
  g_fixture.dir = fixture_dir;
  g_fixture.synthetic = true;
  const fs::path stamp = fs::path(fixture_dir) / "fixture.stamp";
  const std::string expected = "bikecast-fixture v1 seed=20130829 days=733";
  std::string found;
  if (fs::exists(stamp)) {
    std::ifstream in(stamp);
    std::getline(in, found);
  }
  if (found != expected) {
    std::cout << "generating synthetic fixture under " << fixture_dir << " ...\n";
    DatagenOptions options;
    options.out_dir = fixture_dir;
    auto summary = generate_dataset(options);
    std::ofstream out(stamp);
    out << expected << "\n"
        << "status_rows=" << summary.status_rows << " trips=" << summary.trip_rows << "\n";
  }
  std::cout << "data source: synthetic fixture (public-schema files) at " << fixture_dir << "\n";
}

// ---------------------------------------------------------------------
// Criteria

// Root split equals exhaustive enumeration, bit for bit, on 50 random
// small instances.
void tree_split_optimality() {
  Rng rng(1001);
  int checked = 0;
  while (checked < 50) {
    size_t rows = 4 + rng.next_below(9); // 4..12
    size_t cols = 1 + rng.next_below(3); // 1..3
    Matrix X(rows, cols);
    for (double& v : X.data) v = rng.next_normal();
    std::vector<double> y(rows);
    for (double& v : y) v = rng.next_normal();

    RegressionTree tree = fit_regression_tree(X, y, {30, 1});
    auto oracle = oracles::best_split_brute_force(X, y, 1);
    require(!tree.nodes[0].is_leaf(), "tree refused to split a splittable instance");
    require(tree.root_split_sse() == oracle.child_sse,
            "root SSE " + fmt(tree.root_split_sse()) + " != brute force " +
                fmt(oracle.child_sse));
    ++checked;
  }
}

// With unit shrinkage, training SSE never increases over 50 stages and
// every stage coefficient satisfies its normal equation to 1e-10.
void boosting_descent() {
  Rng rng(2002);
  for (int fixture = 0; fixture < 20; ++fixture) {
    size_t n = 40 + rng.next_below(80);
    size_t p = 1 + rng.next_below(4);
    Matrix X(n, p);
    for (double& v : X.data) v = rng.next_normal();
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) {
      double base = std::sin(2.0 * X.at(i, 0));
      if (p > 1) base += 0.5 * X.at(i, 1) * X.at(i, 1);
      y[i] = base + 0.3 * rng.next_normal();
    }
    HyperParams hp;
    hp.kind = LearnerKind::lsboost;
    hp.n_trees = 50;
    hp.shrinkage = 1.0;
    hp.max_depth = 4;
    BoostModel model = fit_lsboost(X, y, hp);

    std::vector<double> f(n, model.f0), h(n);
    double previous = std::numeric_limits<double>::infinity();
    for (size_t s = 0; s < model.stages.size(); ++s) {
      const BoostStage& stage = model.stages[s];
      stage.tree.predict(X, h);
      double residual_dot = 0.0, hh = 0.0;
      for (size_t i = 0; i < n; ++i) {
        residual_dot += (y[i] - f[i] - stage.beta * h[i]) * h[i];
        hh += h[i] * h[i];
      }
      require(std::abs(residual_dot) <= 1e-10 * std::max(1.0, hh),
              "stage " + std::to_string(s) + " violates its normal equation: " +
                  fmt(residual_dot));
      double sse = 0.0;
      for (size_t i = 0; i < n; ++i) {
        f[i] += hp.shrinkage * stage.beta * h[i];
        double d = y[i] - f[i];
        sse += d * d;
      }
      require(sse <= previous * (1.0 + 1e-12) + 1e-12,
              "stage " + std::to_string(s) + " increased training SSE");
      previous = sse;
    }
  }
}

// Full-component PLSR reproduces the normal-equation solution on
// noiseless data; extracted scores are mutually orthogonal.
void plsr_least_squares_equivalence() {
  Rng rng(3003);
  const size_t n = 200, p = 8, q = 3;
  Matrix X(n, p);
  for (double& v : X.data) v = rng.next_normal();
  Matrix B(p, q);
  for (double& v : B.data) v = 2.0 * rng.next_double() - 1.0;
  Matrix Y(n, q);
  for (size_t r = 0; r < n; ++r) {
    for (size_t j = 0; j < q; ++j) {
      double acc = 0.5 * static_cast<double>(j + 1);
      for (size_t c = 0; c < p; ++c) acc += X.at(r, c) * B.at(c, j);
      Y.at(r, j) = acc;
    }
  }
  PLSRModel model = fit_plsr(X, Y, p);
  Matrix ols = oracles::least_squares(X, Y);
  for (size_t c = 0; c < p; ++c) {
    for (size_t j = 0; j < q; ++j) {
      require(std::abs(model.coef.at(c, j) - ols.at(c, j)) < 1e-8,
              "coefficient (" + std::to_string(c) + "," + std::to_string(j) +
                  ") deviates from least squares by " +
                  fmt(std::abs(model.coef.at(c, j) - ols.at(c, j))));
    }
  }

  // replay deflation to recover scores
  Matrix E(n, p);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < p; ++c) E.at(r, c) = X.at(r, c) - model.x_mean[c];
  }
  const size_t A = static_cast<size_t>(model.n_components);
  Matrix T(n, A);
  for (size_t a = 0; a < A; ++a) {
    for (size_t r = 0; r < n; ++r) {
      double acc = 0.0;
      for (size_t c = 0; c < p; ++c) acc += E.at(r, c) * model.weights.at(c, a);
      T.at(r, a) = acc;
    }
    for (size_t r = 0; r < n; ++r) {
      for (size_t c = 0; c < p; ++c) E.at(r, c) -= T.at(r, a) * model.x_loadings.at(c, a);
    }
  }
  for (size_t a = 0; a < A; ++a) {
    for (size_t b = a + 1; b < A; ++b) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (size_t r = 0; r < n; ++r) {
        dot += T.at(r, a) * T.at(r, b);
        na += T.at(r, a) * T.at(r, a);
        nb += T.at(r, b) * T.at(r, b);
      }
      require(std::abs(dot) <= 1e-8 * std::sqrt(na * nb),
              "scores " + std::to_string(a) + " and " + std::to_string(b) + " not orthogonal");
    }
  }
}

// Degenerate forest settings reproduce the single tree bit for bit;
// identical seeds give identical models.
void forest_degeneracy_determinism() {
  Rng rng(4004);
  Matrix X(150, 4);
  for (double& v : X.data) v = rng.next_normal();
  std::vector<double> y(150);
  for (size_t i = 0; i < y.size(); ++i) {
    y[i] = X.at(i, 0) * 2.0 - X.at(i, 3) + 0.2 * rng.next_normal();
  }

  HyperParams hp;
  hp.n_trees = 1;
  hp.bootstrap = false;
  hp.mtry = 4;
  hp.seed = 99;
  ForestModel degenerate = fit_random_forest(X, y, hp);
  RegressionTree tree = fit_regression_tree(X, y, {hp.max_depth, hp.min_samples_leaf});
  require(degenerate.trees.size() == 1, "expected one tree");
  require(degenerate.trees[0] == tree, "degenerate forest differs from the single tree");

  hp.n_trees = 30;
  hp.bootstrap = true;
  hp.mtry = 0;
  ForestModel a = fit_random_forest(X, y, hp);
  ForestModel b = fit_random_forest(X, y, hp);
  require(a == b, "same seed produced different forests");
  std::vector<double> pa(X.rows), pb(X.rows);
  a.predict(X, pa);
  b.predict(X, pb);
  require(pa == pb, "same seed produced different predictions");
}

// The region structure of the trip network: five regions at the default
// edge weight, nearly all trips internal, one city per region.
void region_partition_recovery() {
  const auto& trips = g_fixture.load_trips();
  const auto& stations = g_fixture.load_stations();
  std::vector<int> ids;
  for (const auto& s : stations.records) ids.push_back(s.station_id);

  TripAdjacency adjacency = build_adjacency(trips.records, ids);
  RegionPartition partition = partition_regions(adjacency, 50); // configured default weight
  require(partition.region_count == 5,
          "expected 5 regions, found " + std::to_string(partition.region_count));
  require(partition.intra_fraction >= 0.95,
          "intra-region trip fraction " + fmt(partition.intra_fraction) + " < 0.95");

  std::map<int, std::set<std::string>> cities_per_region;
  for (const auto& s : stations.records) {
    cities_per_region[partition.assignment.at(s.station_id)].insert(s.city);
  }
  for (const auto& [region, cities] : cities_per_region) {
    require(cities.size() == 1, "region " + std::to_string(region) + " spans " +
                                    std::to_string(cities.size()) + " cities");
  }
}

// Desk-scale accuracy: 10 stations, six months, 140 trees, 15-minute
// horizon, 5-fold CV.
void desk_scale_accuracy() {
  auto datasets = g_fixture.desk_datasets(15, 0);
  CvConfig cv;
  cv.k_folds = 5;
  cv.fold_mode = FoldMode::random;
  cv.seed = 1;
  cv.hp.kind = LearnerKind::random_forest;
  cv.hp.n_trees = 140;
  cv.hp.seed = 1;
  EvalReport rf = evaluate_stations(datasets, cv);
  g_fixture.desk_rf_mae_15 = rf.overall_mae;

  cv.hp.kind = LearnerKind::lsboost;
  EvalReport lsboost = evaluate_stations(datasets, cv);
  g_fixture.desk_lsboost_mae_15 = lsboost.overall_mae;

  std::cout << "      rf MAE " << fmt(rf.overall_mae) << ", lsboost MAE "
            << fmt(lsboost.overall_mae) << " bikes/station\n";
  require(rf.overall_mae <= 1.0,
          "rf overall MAE " + fmt(rf.overall_mae) + " exceeds 1.0 bikes/station");
  require(rf.overall_mae <= lsboost.overall_mae + 0.15,
          "rf MAE " + fmt(rf.overall_mae) + " not within 0.15 of lsboost " +
              fmt(lsboost.overall_mae));
}

// Sweep shapes: horizon errors grow 15 -> 120 for both learners; more
// trees do not hurt (140 vs 20); memory depth moves MAE < 20% relative.
void sweep_trends() {
  CvConfig cv;
  cv.k_folds = 5;
  cv.seed = 1;
  cv.hp.seed = 1;

  auto datasets_120 = g_fixture.desk_datasets(120, 0);
  for (LearnerKind kind : {LearnerKind::random_forest, LearnerKind::lsboost}) {
    cv.hp.kind = kind;
    cv.hp.n_trees = 140;
    double mae_15 = kind == LearnerKind::random_forest ? *g_fixture.desk_rf_mae_15
                                                       : *g_fixture.desk_lsboost_mae_15;
    EvalReport far = evaluate_stations(datasets_120, cv);
    std::cout << "      " << learner_name(kind) << ": MAE(15)=" << fmt(mae_15)
              << " MAE(120)=" << fmt(far.overall_mae) << "\n";
    require(far.overall_mae > mae_15,
            std::string(learner_name(kind)) + ": MAE did not grow with the horizon");
  }

  auto datasets_15 = g_fixture.desk_datasets(15, 0);
  std::vector<int> sizes{20, 60, 100, 140, 180};
  for (LearnerKind kind : {LearnerKind::random_forest, LearnerKind::lsboost}) {
    cv.hp.kind = kind;
    auto curve = evaluate_ensemble_curve(datasets_15, cv, sizes);
    std::cout << "      " << learner_name(kind) << " trees {20..180}: ";
    for (double v : curve) std::cout << fmt(v) << ' ';
    std::cout << "\n";
    require(curve[3] <= curve[0], std::string(learner_name(kind)) +
                                      ": MAE at 140 trees " + fmt(curve[3]) +
                                      " > MAE at 20 trees " + fmt(curve[0]));
  }

  cv.hp.kind = LearnerKind::random_forest;
  cv.hp.n_trees = 140;
  double base = 0.0;
  std::cout << "      rf memory 0..7: ";
  for (int m = 0; m <= 7; ++m) {
    EvalReport report = evaluate_stations(g_fixture.desk_datasets(15, m), cv);
    std::cout << fmt(report.overall_mae) << ' ';
    if (m == 0) {
      base = report.overall_mae;
      continue;
    }
    double change = std::abs(report.overall_mae - base) / base;
    require(change < 0.20, "memory " + std::to_string(m) + " moved MAE by " +
                               fmt(100.0 * change) + "% (>= 20%)");
  }
  std::cout << "\n";
}

// Cleaning magnitude: the shared-timestamp count lands near the
// published reduction target.
void cleaning_window_magnitude() {
  const CleanResult& clean = g_fixture.load_cleaned();
  std::cout << "      ticks " << clean.ticks_before << " -> " << clean.ticks_after
            << ", shared " << clean.shared_ticks << ", stations kept "
            << clean.grid.stations.size() << " (removed " << clean.removed.size() << ")\n";
  require(clean.shared_ticks >= 48000.0 * 0.85,
          "shared timestamps " + std::to_string(clean.shared_ticks) + " < 40800");
  require(clean.shared_ticks <= 48000.0 * 1.15,
          "shared timestamps " + std::to_string(clean.shared_ticks) + " > 55200");
}

// Metric implementations against direct-loop recomputation.
void metric_equivalence() {
  Rng rng(6006);
  for (int fixture = 0; fixture < 100; ++fixture) {
    size_t n = 1 + rng.next_below(200);
    std::vector<double> pred(n), actual(n);
    for (size_t i = 0; i < n; ++i) {
      pred[i] = 3.0 * rng.next_normal();
      actual[i] = static_cast<double>(rng.next_below(30));
    }
    require(std::abs(mae_bikes(pred, actual) - oracles::mae_direct(pred, actual)) <= 1e-12,
            "mae deviates from the direct loop");
    require(std::abs(max_ae_bikes(pred, actual) - oracles::max_ae_direct(pred, actual)) <= 1e-12,
            "max_ae deviates from the direct loop");
  }
}

// Full-scale best effort: every retained station / region at the
// 15-minute horizon, compared against the published magnitudes.
void full_data_reproduction() {
  const CleanResult& clean = g_fixture.load_cleaned();
  g_fixture.load_stations();
  WeatherIndex weather(g_fixture.load_weather().records);
  const auto& trips = g_fixture.load_trips();

  TripAdjacency adjacency = build_adjacency(trips.records, clean.grid.stations);
  std::vector<NeighborSet> neighbors;
  for (int id : clean.grid.stations) neighbors.push_back(top_k_neighbors(adjacency, id, 10));

  FeatureOptions options;
  options.horizon_minutes = 15;
  options.memory = 0;
  options.min_rows = 100;
  options.station_zip = g_fixture.station_zip;
  auto station_data = build_station_datasets(clean.grid, neighbors, weather, options);

  CvConfig cv;
  cv.k_folds = 5;
  cv.seed = 1;
  cv.hp.seed = 1;
  cv.hp.n_trees = 140;

  cv.hp.kind = LearnerKind::random_forest;
  EvalReport rf = evaluate_stations(station_data, cv);
  std::cout << "      rf overall MAE " << fmt(rf.overall_mae) << "\n";

  cv.hp.kind = LearnerKind::lsboost;
  EvalReport lsboost = evaluate_stations(station_data, cv);
  std::cout << "      lsboost overall MAE " << fmt(lsboost.overall_mae) << "\n";

  TripAdjacency full_adjacency = build_adjacency(
      trips.records, std::vector<int>(clean.grid.stations.begin(), clean.grid.stations.end()));
  RegionPartition partition = partition_regions(full_adjacency, 50);
  auto region_data = build_region_datasets(clean.grid, partition, weather, options);
  cv.hp.kind = LearnerKind::plsr;
  cv.hp.n_components = 0; // inner 5-fold CV per outer fold
  EvalReport plsr = evaluate_regions(region_data, cv);
  std::cout << "      plsr overall MAE " << fmt(plsr.overall_mae) << "\n";

  require(rf.overall_mae <= 2.0 * 0.37, "rf MAE " + fmt(rf.overall_mae) + " > 0.74");
  require(lsboost.overall_mae <= 2.0 * 0.58,
          "lsboost MAE " + fmt(lsboost.overall_mae) + " > 1.16");
  require(plsr.overall_mae <= 2.0 * 0.6, "plsr MAE " + fmt(plsr.overall_mae) + " > 1.2");
  require(plsr.overall_mae > rf.overall_mae, "plsr did not trail rf");
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<void()> run;
  bool needs_fixture;
};

} // namespace

int main(int argc, char** argv) {
  std::string fixture_dir = "fixture_full";
  bool full = false;
  std::string only;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--fixture-dir" && i + 1 < argc) fixture_dir = argv[++i];
    else if (arg == "--full") full = true;
    else if (arg == "--only" && i + 1 < argc) only = argv[++i];
    else {
      std::cerr << "usage: acceptance [--fixture-dir DIR] [--full] [--only NAME]\n";
      return 1;
    }
  }

  std::vector<Criterion> criteria{
      {"tree_split_optimality", 1.0, tree_split_optimality, false},
      {"boosting_descent", 5.0, boosting_descent, false},
      {"plsr_least_squares_equivalence", 1.0, plsr_least_squares_equivalence, false},
      {"forest_degeneracy_determinism", 1.0, forest_degeneracy_determinism, false},
      {"region_partition_recovery", 30.0, region_partition_recovery, true},
      {"desk_scale_accuracy", 600.0, desk_scale_accuracy, true},
      {"sweep_trends", 1800.0, sweep_trends, true},
      {"cleaning_window_magnitude", 0.0, cleaning_window_magnitude, true},
      {"metric_equivalence", 1.0, metric_equivalence, false},
  };
  if (full) {
    criteria.push_back({"full_data_reproduction", 0.0, full_data_reproduction, true});
  }

  bool any_fixture = false;
  for (const auto& c : criteria) {
    if (!only.empty() && std::string(c.name).find(only) == std::string::npos) continue;
    any_fixture = any_fixture || c.needs_fixture;
  }
  if (any_fixture) {
    try {
      prepare_fixture(fixture_dir);
    } catch (const std::exception& e) {
      std::cerr << "fixture preparation failed: " << e.what() << "\n";
      return 1;
    }
  }

  int failures = 0;
  int ran = 0;
  for (const auto& criterion : criteria) {
    if (!only.empty() && std::string(criterion.name).find(only) == std::string::npos) continue;
    ++ran;
    auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      criterion.run();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty() && criterion.budget_seconds > 0.0 &&
        elapsed > criterion.budget_seconds) {
      failure = "runtime " + fmt(elapsed) + "s exceeded budget " +
                fmt(criterion.budget_seconds) + "s";
    }
    if (failure.empty()) {
      std::printf("PASS  %-32s (%.2fs)\n", criterion.name, elapsed);
    } else {
      std::printf("FAIL  %-32s (%.2fs): %s\n", criterion.name, elapsed, failure.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::cerr << "no criterion matches --only " << only << "\n";
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
