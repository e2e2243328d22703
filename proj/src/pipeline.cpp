#include "bikecast/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

#include "bikecast/csv.hpp"
#include "bikecast/eval.hpp"
#include "bikecast/features.hpp"
#include "bikecast/forest.hpp"
#include "bikecast/graph.hpp"
#include "bikecast/grid.hpp"
#include "bikecast/manifest.hpp"
#include "bikecast/model.hpp"
#include "bikecast/parse.hpp"
#include "bikecast/pipeline.hpp"

namespace bikecast {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string now_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void require_file(const std::string& path, const char* producer) {
  if (!fs::exists(path)) {
    throw Error(errc::missing_upstream_artifact,
                "'" + path + "' not found; run `" + producer + "` first");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_error, "cannot read '" + path + "'");
  return in;
}

RunManifest start_manifest(const RunConfig& cfg, const std::string& stage) {
  RunManifest m;
  m.stage = stage;
  m.started_utc = now_utc();
  m.config = cfg.raw;
  return m;
}

void finish_manifest(RunManifest& m, const RunConfig& cfg, const std::string& stage) {
  write_manifest(m, (fs::path(cfg.out_dir) / ("manifest_" + stage + ".json")).string());
}

timestamp_t parse_window_bound(const std::string& text, bool upper) {
  if (text.empty()) {
    return upper ? std::numeric_limits<timestamp_t>::max()
                 : std::numeric_limits<timestamp_t>::min();
  }
  auto ts = parse_datetime(text, "%Y-%m-%d %H:%M:%S");
  if (!ts) ts = parse_datetime(text + " 00:00:00", "%Y-%m-%d %H:%M:%S");
  if (!ts) throw Error(errc::config_invalid, "bad time window bound '" + text + "'");
  return *ts;
}

// Station metadata is read by several stages.
std::vector<StationMeta> load_station_meta(const RunConfig& cfg) {
  auto in = open_input(cfg.station_path);
  auto parsed = parse_stations(in);
  if (parsed.records.empty()) throw Error(errc::empty_input, "station file has no usable rows");
  return std::move(parsed.records);
}

std::map<int, std::string> station_zip_map(const RunConfig& cfg,
                                           const std::vector<StationMeta>& stations) {
  std::map<int, std::string> out;
  for (const auto& s : stations) {
    auto it = cfg.city_zip.find(s.city);
    if (it == cfg.city_zip.end()) {
      throw Error(errc::config_invalid, "no zip configured for city '" + s.city + "'");
    }
    out[s.station_id] = it->second;
  }
  return out;
}

json report_to_json(const EvalReport& r) {
  json stations = json::array();
  for (const auto& s : r.stations) {
    stations.push_back(json{{"station_id", s.station_id},
                            {"rows", s.rows},
                            {"mae_bikes", s.mae},
                            {"max_ae_bikes", s.max_ae}});
  }
  return json{{"learner", r.learner},
              {"horizon_minutes", r.horizon_minutes},
              {"memory", r.memory},
              {"k_folds", r.k_folds},
              {"fold_mode", r.fold_mode == FoldMode::random ? "random" : "blocked"},
              {"seed", r.seed},
              {"overall_mae_bikes", r.overall_mae},
              {"wall_seconds", r.wall_seconds},
              {"stations", std::move(stations)}};
}

struct LoadedFeatures {
  std::vector<StationDataset> stations;
  std::vector<RegionDataset> regions;
};

json features_meta(const RunConfig& cfg) {
  std::string path = (fs::path(cfg.out_dir) / "features_manifest.json").string();
  require_file(path, "features");
  auto in = open_input(path);
  return json::parse(in);
}

StationDataset read_station_dataset_csv(std::istream& in, int station_id, int horizon,
                                        int memory) {
  TableReader reader(in, ',');
  StationDataset ds;
  ds.station_id = station_id;
  ds.horizon_minutes = horizon;
  ds.memory = memory;
  const auto& header = reader.header();
  if (header.empty() || header.back() != "target") {
    throw Error(errc::malformed_row, "dataset table must end with a target column");
  }
  ds.feature_names.assign(header.begin(), header.end() - 1);
  std::vector<std::string> fields;
  std::vector<double> flat;
  while (reader.next(fields)) {
    if (fields.size() != header.size()) throw Error(errc::malformed_row, "ragged dataset row");
    for (size_t i = 0; i + 1 < fields.size(); ++i) flat.push_back(std::stod(fields[i]));
    ds.y.push_back(std::stod(fields.back()));
  }
  ds.X.rows = ds.y.size();
  ds.X.cols = ds.feature_names.size();
  ds.X.data = std::move(flat);
  return ds;
}

RegionDataset read_region_dataset_csv(std::istream& in, int region, int horizon) {
  TableReader reader(in, ',');
  RegionDataset ds;
  ds.region = region;
  ds.horizon_minutes = horizon;
  const auto& header = reader.header();
  size_t first_target = header.size();
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i].rfind("target_", 0) == 0) {
      first_target = i;
      break;
    }
  }
  if (first_target == header.size()) {
    throw Error(errc::malformed_row, "region dataset has no target_<id> columns");
  }
  ds.feature_names.assign(header.begin(), header.begin() + first_target);
  for (size_t i = first_target; i < header.size(); ++i) {
    ds.member_stations.push_back(std::stoi(header[i].substr(7)));
  }
  std::vector<std::string> fields;
  std::vector<double> flat_x, flat_y;
  while (reader.next(fields)) {
    if (fields.size() != header.size()) throw Error(errc::malformed_row, "ragged dataset row");
    for (size_t i = 0; i < first_target; ++i) flat_x.push_back(std::stod(fields[i]));
    for (size_t i = first_target; i < fields.size(); ++i) flat_y.push_back(std::stod(fields[i]));
  }
  ds.X.cols = ds.feature_names.size();
  ds.X.rows = ds.X.cols ? flat_x.size() / ds.X.cols : 0;
  ds.X.data = std::move(flat_x);
  ds.Y.cols = ds.member_stations.size();
  ds.Y.rows = ds.Y.cols ? flat_y.size() / ds.Y.cols : 0;
  ds.Y.data = std::move(flat_y);
  return ds;
}

LoadedFeatures load_features(const RunConfig& cfg, bool want_regions) {
  json meta = features_meta(cfg);
  const int horizon = meta.at("horizon_minutes").get<int>();
  const int memory = meta.at("memory").get<int>();
  LoadedFeatures out;
  if (!want_regions) {
    for (const auto& entry : meta.at("stations")) {
      int id = entry.at("station_id").get<int>();
      std::string path = (fs::path(cfg.out_dir) / "features" /
                          ("station_" + std::to_string(id) + ".csv")).string();
      require_file(path, "features");
      auto in = open_input(path);
      out.stations.push_back(read_station_dataset_csv(in, id, horizon, memory));
    }
    if (out.stations.empty()) throw Error(errc::missing_upstream_artifact, "no station datasets");
  } else {
    if (!meta.contains("regions")) {
      throw Error(errc::missing_upstream_artifact,
                  "features were built without a region partition; run `graph` then `features`");
    }
    for (const auto& entry : meta.at("regions")) {
      int z = entry.at("region").get<int>();
      std::string path =
          (fs::path(cfg.out_dir) / "features" / ("region_" + std::to_string(z) + ".csv")).string();
      require_file(path, "features");
      auto in = open_input(path);
      out.regions.push_back(read_region_dataset_csv(in, z, horizon));
    }
    if (out.regions.empty()) throw Error(errc::missing_upstream_artifact, "no region datasets");
  }
  return out;
}

void write_region_dataset_csv(const RegionDataset& ds, std::ostream& out) {
  for (const auto& name : ds.feature_names) out << name << ',';
  for (size_t j = 0; j < ds.member_stations.size(); ++j) {
    out << "target_" << ds.member_stations[j] << (j + 1 < ds.member_stations.size() ? "," : "");
  }
  out << '\n';
  for (size_t r = 0; r < ds.X.rows; ++r) {
    for (size_t c = 0; c < ds.X.cols; ++c) out << format_double(ds.X.at(r, c)) << ',';
    for (size_t j = 0; j < ds.Y.cols; ++j) {
      out << format_double(ds.Y.at(r, j)) << (j + 1 < ds.Y.cols ? "," : "");
    }
    out << '\n';
  }
}

// Keeps only grid stations and renumbers the surviving regions
// contiguously (cleaning and station filters may empty some out).
RegionPartition restrict_partition(const RegionPartition& partition,
                                   const std::vector<int>& stations) {
  std::set<int> keep(stations.begin(), stations.end());
  std::map<int, std::vector<int>> members_by_region;
  for (const auto& [id, region] : partition.assignment) {
    if (keep.count(id)) members_by_region[region].push_back(id);
  }
  RegionPartition out;
  out.intra_fraction = partition.intra_fraction;
  for (const auto& [region, ids] : members_by_region) {
    ++out.region_count;
    for (int id : ids) out.assignment[id] = out.region_count;
  }
  return out;
}

std::string sweep_artifact_name(const RunConfig& cfg) {
  const std::string learner = learner_name(cfg.hp.kind);
  if (cfg.sweep_axis == "horizon" && learner == "rf" && !cfg.sweep_tree_curves.empty()) {
    return "fig2_rf_horizon_trees";
  }
  if (cfg.sweep_axis == "horizon" && learner == "lsboost" && !cfg.sweep_tree_curves.empty()) {
    return "fig3_lsboost_horizon_trees";
  }
  if (cfg.sweep_axis == "memory" && learner == "rf") return "fig6_memory";
  return "sweep_" + learner + "_" + cfg.sweep_axis;
}

} // namespace

void run_ingest(const RunConfig& cfg) {
  require_file(cfg.status_path, "datagen (or point data.dir at the dataset)");
  fs::create_directories(cfg.out_dir);
  RunManifest manifest = start_manifest(cfg, "ingest");
  manifest.input_checksums[cfg.status_path] = file_checksum(cfg.status_path);

  auto in = open_input(cfg.status_path);
  auto parsed = parse_status(in);
  manifest.counts["status_rows_read"] = parsed.rows_read;
  manifest.counts["status_records"] = static_cast<std::int64_t>(parsed.records.size());
  manifest.counts["status_row_errors"] = static_cast<std::int64_t>(parsed.errors.size());
  if (parsed.records.empty()) throw Error(errc::empty_input, "status file has no usable rows");

  SnapshotGrid grid = resample_grid(parsed.records, cfg.tick_seconds, cfg.max_gap_seconds, cfg.jobs);
  if (!cfg.station_filter.empty() || !cfg.window_from.empty() || !cfg.window_to.empty()) {
    std::vector<int> keep = cfg.station_filter;
    if (keep.empty()) keep = grid.stations;
    grid = restrict_grid(grid, keep, parse_window_bound(cfg.window_from, false),
                         parse_window_bound(cfg.window_to, true));
  }
  manifest.counts["grid_ticks_raw"] = static_cast<std::int64_t>(grid.n_ticks);

  CleanResult cleaned = clean_stations(grid, cfg.min_coverage);
  manifest.counts["grid_ticks_clean"] = static_cast<std::int64_t>(cleaned.grid.n_ticks);
  manifest.counts["shared_ticks"] = static_cast<std::int64_t>(cleaned.shared_ticks);
  manifest.counts["stations_kept"] = static_cast<std::int64_t>(cleaned.grid.stations.size());
  manifest.counts["stations_removed"] = static_cast<std::int64_t>(cleaned.removed.size());

  const std::string grid_path = (fs::path(cfg.out_dir) / "grid.csv").string();
  {
    std::ofstream out(grid_path);
    write_grid_csv(cleaned.grid, out);
  }
  {
    json removed = json::array();
    for (const auto& r : cleaned.removed) {
      removed.push_back(json{{"station_id", r.station_id}, {"coverage", r.coverage}});
    }
    json j{{"removed", std::move(removed)},
           {"ticks_before", cleaned.ticks_before},
           {"ticks_after", cleaned.ticks_after},
           {"shared_ticks", cleaned.shared_ticks},
           {"stations_kept", cleaned.grid.stations.size()},
           {"row_errors", parsed.errors.size()}};
    std::ofstream out(fs::path(cfg.out_dir) / "cleaning.json");
    out << j.dump(2) << '\n';
  }
  manifest.output_checksums[grid_path] = file_checksum(grid_path);
  finish_manifest(manifest, cfg, "ingest");
}

void run_graph(const RunConfig& cfg) {
  require_file(cfg.trip_path, "datagen (or point data.dir at the dataset)");
  const std::string grid_path = (fs::path(cfg.out_dir) / "grid.csv").string();
  require_file(grid_path, "ingest");
  fs::create_directories(cfg.out_dir);
  RunManifest manifest = start_manifest(cfg, "graph");
  manifest.input_checksums[cfg.trip_path] = file_checksum(cfg.trip_path);
  manifest.input_checksums[grid_path] = file_checksum(grid_path);

  auto stations = load_station_meta(cfg);
  std::vector<int> all_ids;
  for (const auto& s : stations) all_ids.push_back(s.station_id);

  auto trips_in = open_input(cfg.trip_path);
  auto trips = parse_trips(trips_in);
  manifest.counts["trip_rows_read"] = trips.rows_read;
  manifest.counts["trip_records"] = static_cast<std::int64_t>(trips.records.size());
  manifest.counts["trip_row_errors"] = static_cast<std::int64_t>(trips.errors.size());

  TripAdjacency adjacency = build_adjacency(trips.records, all_ids);
  manifest.counts["trips_skipped_unknown"] = adjacency.skipped_trips;
  RegionPartition partition = partition_regions(adjacency, cfg.region_edge_weight);
  manifest.counts["regions"] = partition.region_count;

  SnapshotGrid grid;
  {
    auto in = open_input(grid_path);
    grid = read_grid_csv(in);
  }
  TripAdjacency grid_adjacency = build_adjacency(trips.records, grid.stations);
  std::vector<NeighborSet> neighbors;
  for (int id : grid.stations) {
    neighbors.push_back(top_k_neighbors(grid_adjacency, id, cfg.neighbor_k));
  }

  auto emit = [&](const char* name, auto&& writer) {
    const std::string path = (fs::path(cfg.out_dir) / name).string();
    {
      std::ofstream out(path);
      writer(out);
    }
    manifest.output_checksums[path] = file_checksum(path);
  };
  emit("adjacency.csv", [&](std::ostream& out) { write_adjacency_csv(adjacency, out); });
  emit("regions.csv", [&](std::ostream& out) { write_partition_csv(partition, out); });
  emit("neighbors.csv", [&](std::ostream& out) { write_neighbors_csv(neighbors, out); });
  {
    json j{{"region_count", partition.region_count},
           {"intra_fraction", partition.intra_fraction},
           {"min_edge_weight", cfg.region_edge_weight},
           {"skipped_trips", adjacency.skipped_trips}};
    std::ofstream out(fs::path(cfg.out_dir) / "graph_summary.json");
    out << j.dump(2) << '\n';
  }
  finish_manifest(manifest, cfg, "graph");
}

void run_features(const RunConfig& cfg) {
  const std::string grid_path = (fs::path(cfg.out_dir) / "grid.csv").string();
  const std::string neighbors_path = (fs::path(cfg.out_dir) / "neighbors.csv").string();
  const std::string regions_path = (fs::path(cfg.out_dir) / "regions.csv").string();
  require_file(grid_path, "ingest");
  require_file(neighbors_path, "graph");
  require_file(cfg.weather_path, "datagen (or point data.dir at the dataset)");

  RunManifest manifest = start_manifest(cfg, "features");
  manifest.input_checksums[grid_path] = file_checksum(grid_path);
  manifest.input_checksums[neighbors_path] = file_checksum(neighbors_path);
  manifest.input_checksums[cfg.weather_path] = file_checksum(cfg.weather_path);

  SnapshotGrid grid;
  {
    auto in = open_input(grid_path);
    grid = read_grid_csv(in);
  }
  std::vector<NeighborSet> neighbors;
  {
    auto in = open_input(neighbors_path);
    neighbors = read_neighbors_csv(in);
  }
  // Stations with no inbound trips still get (empty) neighbor sets.
  {
    std::set<int> seen;
    for (const auto& n : neighbors) seen.insert(n.station_id);
    for (int id : grid.stations) {
      if (!seen.count(id)) neighbors.push_back({id, {}});
    }
    std::sort(neighbors.begin(), neighbors.end(),
              [](const NeighborSet& a, const NeighborSet& b) { return a.station_id < b.station_id; });
  }

  auto weather_in = open_input(cfg.weather_path);
  auto weather_parsed = parse_weather(weather_in);
  manifest.counts["weather_records"] = static_cast<std::int64_t>(weather_parsed.records.size());
  WeatherIndex weather(weather_parsed.records);

  auto stations_meta = load_station_meta(cfg);
  FeatureOptions options;
  options.horizon_minutes = cfg.horizon_minutes;
  options.memory = cfg.memory;
  options.min_rows = cfg.min_rows;
  options.station_zip = station_zip_map(cfg, stations_meta);

  fs::create_directories(fs::path(cfg.out_dir) / "features");
  auto datasets = build_station_datasets(grid, neighbors, weather, options, cfg.jobs);

  json meta;
  meta["horizon_minutes"] = cfg.horizon_minutes;
  meta["memory"] = cfg.memory;
  json station_entries = json::array();
  std::int64_t total_rows = 0;
  for (const auto& ds : datasets) {
    std::string path = (fs::path(cfg.out_dir) / "features" /
                        ("station_" + std::to_string(ds.station_id) + ".csv")).string();
    std::ofstream out(path);
    write_dataset_csv(ds, out);
    out.close();
    json entry{{"station_id", ds.station_id},
               {"rows", ds.X.rows},
               {"columns", ds.feature_names},
               {"neighbor_ids", json::array()}};
    for (const auto& name : ds.feature_names) {
      if (name.rfind("nbr_", 0) == 0) entry["neighbor_ids"].push_back(std::stoi(name.substr(4)));
    }
    station_entries.push_back(std::move(entry));
    manifest.output_checksums[path] = file_checksum(path);
    total_rows += static_cast<std::int64_t>(ds.X.rows);
  }
  meta["stations"] = std::move(station_entries);
  manifest.counts["station_dataset_rows"] = total_rows;

  if (fs::exists(regions_path)) {
    manifest.input_checksums[regions_path] = file_checksum(regions_path);
    RegionPartition partition;
    {
      auto in = open_input(regions_path);
      partition = read_partition_csv(in);
    }
    RegionPartition grid_partition = restrict_partition(partition, grid.stations);
    auto regions = build_region_datasets(grid, grid_partition, weather, options, cfg.jobs);
    json region_entries = json::array();
    for (const auto& ds : regions) {
      std::string path = (fs::path(cfg.out_dir) / "features" /
                          ("region_" + std::to_string(ds.region) + ".csv")).string();
      std::ofstream out(path);
      write_region_dataset_csv(ds, out);
      out.close();
      region_entries.push_back(json{{"region", ds.region},
                                    {"rows", ds.X.rows},
                                    {"members", ds.member_stations}});
      manifest.output_checksums[path] = file_checksum(path);
    }
    meta["regions"] = std::move(region_entries);
  }

  const std::string meta_path = (fs::path(cfg.out_dir) / "features_manifest.json").string();
  {
    std::ofstream out(meta_path);
    out << meta.dump(2) << '\n';
  }
  manifest.output_checksums[meta_path] = file_checksum(meta_path);
  finish_manifest(manifest, cfg, "features");
}

void run_train(const RunConfig& cfg) {
  RunManifest manifest = start_manifest(cfg, "train");
  fs::create_directories(fs::path(cfg.out_dir) / "models");
  const std::string learner = learner_name(cfg.hp.kind);

  if (cfg.hp.kind == LearnerKind::plsr) {
    LoadedFeatures data = load_features(cfg, true);
    for (const auto& ds : data.regions) {
      int a = cfg.hp.n_components;
      if (a <= 0) {
        a = select_plsr_components(ds.X, ds.Y, static_cast<int>(std::min<size_t>(20, ds.X.cols)),
                                   5, cfg.hp.seed);
      }
      Model model = fit_plsr(ds.X, ds.Y, a);
      std::string path = (fs::path(cfg.out_dir) / "models" /
                          ("plsr_region_" + std::to_string(ds.region) + ".json")).string();
      std::ofstream out(path);
      save_model(model, out);
      out.close();
      manifest.output_checksums[path] = file_checksum(path);
    }
    manifest.counts["models"] = static_cast<std::int64_t>(data.regions.size());
  } else {
    LoadedFeatures data = load_features(cfg, false);
    std::map<std::string, double> importance_sum;
    for (const auto& ds : data.stations) {
      Model model;
      if (cfg.hp.kind == LearnerKind::random_forest) {
        ForestModel forest = fit_random_forest(ds.X, ds.y, cfg.hp, ds.feature_names, cfg.jobs);
        for (const auto& [name, weight] : feature_importance(forest)) {
          importance_sum[name] += weight;
        }
        model = std::move(forest);
      } else if (cfg.hp.kind == LearnerKind::lsboost) {
        model = fit_lsboost(ds.X, ds.y, cfg.hp, ds.feature_names);
      } else {
        TreeParams tp{cfg.hp.max_depth, cfg.hp.min_samples_leaf};
        model = fit_regression_tree(ds.X, ds.y, tp, all_features_sampler(), cfg.hp.seed);
      }
      std::string path = (fs::path(cfg.out_dir) / "models" /
                          (learner + "_station_" + std::to_string(ds.station_id) + ".json"))
                             .string();
      std::ofstream out(path);
      save_model(model, out);
      out.close();
      manifest.output_checksums[path] = file_checksum(path);
    }
    manifest.counts["models"] = static_cast<std::int64_t>(data.stations.size());

    if (!importance_sum.empty()) {
      // Mean split-gain importance across the per-station forests.
      std::string path = (fs::path(cfg.out_dir) / ("importance_" + learner + ".csv")).string();
      std::ofstream out(path);
      out << "feature,importance\n";
      std::vector<std::pair<std::string, double>> rows(importance_sum.begin(),
                                                       importance_sum.end());
      for (auto& [name, w] : rows) w /= static_cast<double>(data.stations.size());
      std::sort(rows.begin(), rows.end(),
                [](const auto& a, const auto& b) { return a.second > b.second; });
      for (const auto& [name, w] : rows) out << name << ',' << format_double(w) << '\n';
      out.close();
      manifest.output_checksums[path] = file_checksum(path);
    }
  }
  finish_manifest(manifest, cfg, "train");
}

void run_evaluate(const RunConfig& cfg) {
  RunManifest manifest = start_manifest(cfg, "evaluate");
  const std::string learner = learner_name(cfg.hp.kind);
  CvConfig cv{cfg.hp, cfg.k_folds, cfg.fold_mode, cfg.cv_seed};

  EvalReport report;
  if (cfg.hp.kind == LearnerKind::plsr) {
    LoadedFeatures data = load_features(cfg, true);
    report = evaluate_regions(data.regions, cv, cfg.jobs);
  } else {
    LoadedFeatures data = load_features(cfg, false);
    report = evaluate_stations(data.stations, cv, cfg.jobs);
  }

  const std::string json_path = (fs::path(cfg.out_dir) / ("eval_" + learner + ".json")).string();
  {
    std::ofstream out(json_path);
    out << report_to_json(report).dump(2) << '\n';
  }
  const std::string csv_path =
      (fs::path(cfg.out_dir) / ("eval_" + learner + "_stations.csv")).string();
  {
    std::ofstream out(csv_path);
    write_report_csv(report, out);
  }
  manifest.output_checksums[json_path] = file_checksum(json_path);
  manifest.output_checksums[csv_path] = file_checksum(csv_path);
  manifest.counts["stations_evaluated"] = static_cast<std::int64_t>(report.stations.size());
  finish_manifest(manifest, cfg, "evaluate");
}

void run_sweep(const RunConfig& cfg) {
  const std::string grid_path = (fs::path(cfg.out_dir) / "grid.csv").string();
  const std::string neighbors_path = (fs::path(cfg.out_dir) / "neighbors.csv").string();
  require_file(grid_path, "ingest");
  require_file(neighbors_path, "graph");
  require_file(cfg.weather_path, "datagen (or point data.dir at the dataset)");
  RunManifest manifest = start_manifest(cfg, "sweep");

  SnapshotGrid grid;
  {
    auto in = open_input(grid_path);
    grid = read_grid_csv(in);
  }
  DataBundle bundle;
  bundle.grid = &grid;
  {
    auto in = open_input(neighbors_path);
    bundle.neighbors = read_neighbors_csv(in);
  }
  {
    std::set<int> seen;
    for (const auto& n : bundle.neighbors) seen.insert(n.station_id);
    for (int id : grid.stations) {
      if (!seen.count(id)) bundle.neighbors.push_back({id, {}});
    }
    std::sort(bundle.neighbors.begin(), bundle.neighbors.end(),
              [](const NeighborSet& a, const NeighborSet& b) { return a.station_id < b.station_id; });
  }
  if (cfg.hp.kind == LearnerKind::plsr) {
    const std::string regions_path = (fs::path(cfg.out_dir) / "regions.csv").string();
    require_file(regions_path, "graph");
    auto in = open_input(regions_path);
    RegionPartition partition = read_partition_csv(in);
    bundle.partition = restrict_partition(partition, grid.stations);
  }

  auto weather_in = open_input(cfg.weather_path);
  auto weather_parsed = parse_weather(weather_in);
  WeatherIndex weather(weather_parsed.records);
  bundle.weather = &weather;

  auto stations_meta = load_station_meta(cfg);
  bundle.options.horizon_minutes = cfg.horizon_minutes;
  bundle.options.memory = cfg.memory;
  bundle.options.min_rows = cfg.min_rows;
  bundle.options.station_zip = station_zip_map(cfg, stations_meta);

  SweepRequest request;
  request.axis = cfg.sweep_axis;
  request.grid = cfg.sweep_grid;
  if (request.grid.empty()) {
    if (request.axis == "horizon") request.grid = {15, 30, 45, 60, 75, 90, 105, 120};
    else if (request.axis == "trees") request.grid = {20, 60, 100, 140, 180};
    else request.grid = {0, 1, 2, 3, 4, 5, 6, 7};
  }
  if (request.axis == "horizon" && cfg.hp.kind != LearnerKind::plsr) {
    request.tree_curves = cfg.sweep_tree_curves;
  }

  CvConfig cv{cfg.hp, cfg.k_folds, cfg.fold_mode, cfg.cv_seed};
  SweepResult result = run_sweep(request, cv, bundle, cfg.jobs);

  const std::string base = sweep_artifact_name(cfg);
  const std::string csv_path = (fs::path(cfg.out_dir) / (base + ".csv")).string();
  {
    std::ofstream out(csv_path);
    write_sweep_csv(result, out);
  }
  const std::string json_path = (fs::path(cfg.out_dir) / (base + ".json")).string();
  {
    json j{{"axis", result.axis}, {"grid", result.grid}, {"learner", learner_name(cfg.hp.kind)}};
    for (const auto& [label, curve] : result.curves) j["curves"][label] = curve;
    std::ofstream out(json_path);
    out << j.dump(2) << '\n';
  }
  manifest.output_checksums[csv_path] = file_checksum(csv_path);
  manifest.output_checksums[json_path] = file_checksum(json_path);
  manifest.counts["grid_points"] = static_cast<std::int64_t>(result.grid.size());
  finish_manifest(manifest, cfg, "sweep");
}

void run_report(const RunConfig& cfg) {
  RunManifest manifest = start_manifest(cfg, "report");
  std::vector<json> reports;
  for (const char* learner : {"rf", "lsboost", "plsr", "tree"}) {
    fs::path path = fs::path(cfg.out_dir) / ("eval_" + std::string(learner) + ".json");
    if (fs::exists(path)) {
      auto in = open_input(path.string());
      reports.push_back(json::parse(in));
      manifest.input_checksums[path.string()] = file_checksum(path.string());
    }
  }
  if (reports.empty()) {
    throw Error(errc::no_results, "no eval_*.json found in '" + cfg.out_dir + "'");
  }

  std::ofstream txt(fs::path(cfg.out_dir) / "summary.txt");
  std::ofstream csv(fs::path(cfg.out_dir) / "summary.csv");
  csv << "learner,horizon_minutes,overall_mae_bikes,stations\n";
  txt << "Availability forecasting summary\n";
  txt << "================================\n\n";
  txt << "Overall MAE (bikes/station), " << reports.front().at("k_folds").get<int>()
      << "-fold CV:\n";
  for (const auto& r : reports) {
    txt << "  " << r.at("learner").get<std::string>() << " @ "
        << r.at("horizon_minutes").get<int>() << " min: "
        << r.at("overall_mae_bikes").get<double>() << "\n";
    csv << r.at("learner").get<std::string>() << ',' << r.at("horizon_minutes").get<int>() << ','
        << format_double(r.at("overall_mae_bikes").get<double>()) << ','
        << r.at("stations").size() << '\n';
  }

  // Hardest stations by MaxAE (first report's learner).
  {
    const json& r = reports.front();
    std::vector<std::pair<double, int>> worst;
    for (const auto& s : r.at("stations")) {
      worst.push_back({s.at("max_ae_bikes").get<double>(), s.at("station_id").get<int>()});
    }
    std::sort(worst.rbegin(), worst.rend());
    txt << "\nTop-" << std::min<size_t>(10, worst.size()) << " stations by MaxAE ("
        << r.at("learner").get<std::string>() << "):\n";
    const std::string fig4_path = (fs::path(cfg.out_dir) / "fig4_maxae.csv").string();
    std::ofstream fig4(fig4_path);
    fig4 << "station_id,max_ae_bikes\n";
    for (const auto& s : r.at("stations")) {
      fig4 << s.at("station_id").get<int>() << ','
           << format_double(s.at("max_ae_bikes").get<double>()) << '\n';
    }
    for (size_t i = 0; i < std::min<size_t>(10, worst.size()); ++i) {
      txt << "  station " << worst[i].second << ": " << worst[i].first << "\n";
    }
    manifest.output_checksums[fig4_path] = file_checksum(fig4_path);
  }

  // Sweep minima and the cross-learner horizon comparison.
  json comparison;
  for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
    std::string name = entry.path().filename().string();
    if (entry.path().extension() != ".json" ||
        (name.rfind("fig", 0) != 0 && name.rfind("sweep_", 0) != 0)) {
      continue;
    }
    auto in = open_input(entry.path().string());
    json sweep = json::parse(in);
    if (!sweep.contains("axis") || !sweep.contains("curves")) continue;
    const auto& grid = sweep.at("grid");
    const auto& mae = sweep.at("curves").at("mae");
    size_t best = 0;
    for (size_t i = 1; i < mae.size(); ++i) {
      if (mae[i].get<double>() < mae[best].get<double>()) best = i;
    }
    txt << "\n" << name << ": min MAE " << mae[best].get<double>() << " at "
        << sweep.at("axis").get<std::string>() << "=" << grid[best].get<int>() << "\n";
    if (sweep.at("axis") == "horizon") {
      comparison[sweep.at("learner").get<std::string>()] = {{"grid", grid}, {"mae", mae}};
    }
  }
  if (comparison.size() >= 2) {
    const std::string fig8_path = (fs::path(cfg.out_dir) / "fig8_comparison.csv").string();
    std::ofstream fig8(fig8_path);
    fig8 << "horizon_minutes";
    for (auto it = comparison.begin(); it != comparison.end(); ++it) fig8 << ',' << it.key();
    fig8 << '\n';
    const auto& grid = comparison.begin().value().at("grid");
    for (size_t i = 0; i < grid.size(); ++i) {
      fig8 << grid[i].get<int>();
      for (auto it = comparison.begin(); it != comparison.end(); ++it) {
        const auto& mae = it.value().at("mae");
        fig8 << ',' << (i < mae.size() ? format_double(mae[i].get<double>()) : "");
      }
      fig8 << '\n';
    }
    manifest.output_checksums[fig8_path] = file_checksum(fig8_path);
  }
  manifest.counts["reports"] = static_cast<std::int64_t>(reports.size());
  finish_manifest(manifest, cfg, "report");
}

int run_command(const std::string& command, const RunConfig& cfg) {
  try {
    if (command == "ingest") run_ingest(cfg);
    else if (command == "graph") run_graph(cfg);
    else if (command == "features") run_features(cfg);
    else if (command == "train") run_train(cfg);
    else if (command == "evaluate") run_evaluate(cfg);
    else if (command == "sweep") run_sweep(cfg);
    else if (command == "report") run_report(cfg);
    else {
      std::cerr << "unknown command '" << command << "'\n";
      return 1;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == errc::config_invalid ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

} // namespace bikecast
