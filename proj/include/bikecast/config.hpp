#ifndef BIKECAST_CONFIG_HPP
#define BIKECAST_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bikecast/eval.hpp"
#include "bikecast/hyperparams.hpp"

namespace bikecast {

// Flat key=value configuration; every key can be overridden from the
// command line. Unknown keys are rejected so typos fail loudly.
struct RunConfig {
  // inputs
  std::string data_dir; // default for the four files below
  std::string status_path, trip_path, weather_path, station_path;
  std::string out_dir = "out";
  int jobs = 1;

  // ingest
  std::int64_t tick_seconds = 900;
  std::int64_t max_gap_seconds = 3600;
  double min_coverage = 0.9;
  std::vector<int> station_filter; // empty = all
  std::string window_from, window_to; // ISO "YYYY-MM-DD HH:MM:SS", empty = open

  // graph
  int neighbor_k = 10;
  std::int64_t region_edge_weight = 50;

  // features
  int horizon_minutes = 15;
  int memory = 0;
  size_t min_rows = 100;
  std::map<std::string, std::string> city_zip; // city -> weather zip

  // learner + cv
  HyperParams hp;
  int k_folds = 5;
  FoldMode fold_mode = FoldMode::random;
  std::uint64_t cv_seed = 1;

  // sweep
  std::string sweep_axis = "horizon";
  std::vector<int> sweep_grid;
  std::vector<int> sweep_tree_curves;

  // raw key=value pairs as given (manifest snapshot)
  std::map<std::string, std::string> raw;
};

RunConfig default_config();

// Reads `path` (empty = defaults only), then applies overrides of the
// form "key=value". The BIKECAST_DATA_DIR environment variable seeds
// data.dir when the config does not set it.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

} // namespace bikecast

#endif
