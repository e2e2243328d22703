#include "bikecast/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "bikecast/error.hpp"

namespace bikecast {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos < value.size()) {
    size_t comma = value.find(',', pos);
    std::string item = trim(value.substr(pos, comma == std::string::npos ? comma : comma - pos));
    if (!item.empty()) {
      int v = 0;
      auto res = std::from_chars(item.data(), item.data() + item.size(), v);
      if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
        throw Error(errc::config_invalid, key + ": bad integer '" + item + "'");
      }
      out.push_back(v);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& value, const std::string& key) {
  T v{};
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw Error(errc::config_invalid, key + ": bad value '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(errc::config_invalid, key + ": bad boolean '" + value + "'");
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "data.dir") cfg.data_dir = value;
  else if (key == "data.status") cfg.status_path = value;
  else if (key == "data.trips") cfg.trip_path = value;
  else if (key == "data.weather") cfg.weather_path = value;
  else if (key == "data.stations") cfg.station_path = value;
  else if (key == "out.dir") cfg.out_dir = value;
  else if (key == "jobs") cfg.jobs = parse_number<int>(value, key);
  else if (key == "ingest.tick_seconds") cfg.tick_seconds = parse_number<std::int64_t>(value, key);
  else if (key == "ingest.max_gap_seconds") cfg.max_gap_seconds = parse_number<std::int64_t>(value, key);
  else if (key == "ingest.min_coverage") cfg.min_coverage = std::stod(value);
  else if (key == "ingest.stations") cfg.station_filter = parse_int_list(value, key);
  else if (key == "ingest.from") cfg.window_from = value;
  else if (key == "ingest.to") cfg.window_to = value;
  else if (key == "graph.neighbor_k") cfg.neighbor_k = parse_number<int>(value, key);
  else if (key == "graph.region_edge_weight") cfg.region_edge_weight = parse_number<std::int64_t>(value, key);
  else if (key == "features.horizon_minutes") cfg.horizon_minutes = parse_number<int>(value, key);
  else if (key == "features.memory") cfg.memory = parse_number<int>(value, key);
  else if (key == "features.min_rows") cfg.min_rows = parse_number<size_t>(value, key);
  else if (key == "features.city_zip") {
    // "City=zip;City=zip" pairs
    cfg.city_zip.clear();
    size_t pos = 0;
    while (pos < value.size()) {
      size_t semi = value.find(';', pos);
      std::string pair = value.substr(pos, semi == std::string::npos ? semi : semi - pos);
      size_t eq = pair.find('=');
      if (eq == std::string::npos) throw Error(errc::config_invalid, "features.city_zip: '" + pair + "'");
      cfg.city_zip[trim(pair.substr(0, eq))] = trim(pair.substr(eq + 1));
      if (semi == std::string::npos) break;
      pos = semi + 1;
    }
  } else if (key == "train.learner") cfg.hp.kind = learner_from_name(value);
  else if (key == "train.n_trees") cfg.hp.n_trees = parse_number<int>(value, key);
  else if (key == "train.mtry") cfg.hp.mtry = parse_number<int>(value, key);
  else if (key == "train.max_depth") cfg.hp.max_depth = parse_number<int>(value, key);
  else if (key == "train.min_samples_leaf") cfg.hp.min_samples_leaf = parse_number<int>(value, key);
  else if (key == "train.shrinkage") cfg.hp.shrinkage = std::stod(value);
  else if (key == "train.n_components") cfg.hp.n_components = parse_number<int>(value, key);
  else if (key == "train.bootstrap") cfg.hp.bootstrap = parse_bool(value, key);
  else if (key == "train.seed") cfg.hp.seed = parse_number<std::uint64_t>(value, key);
  else if (key == "eval.k_folds") cfg.k_folds = parse_number<int>(value, key);
  else if (key == "eval.fold_mode") {
    if (value == "random") cfg.fold_mode = FoldMode::random;
    else if (value == "blocked") cfg.fold_mode = FoldMode::blocked;
    else throw Error(errc::config_invalid, "eval.fold_mode must be random or blocked");
  } else if (key == "eval.seed") cfg.cv_seed = parse_number<std::uint64_t>(value, key);
  else if (key == "sweep.axis") cfg.sweep_axis = value;
  else if (key == "sweep.grid") cfg.sweep_grid = parse_int_list(value, key);
  else if (key == "sweep.tree_curves") cfg.sweep_tree_curves = parse_int_list(value, key);
  else throw Error(errc::config_invalid, "unknown config key '" + key + "'");
  cfg.raw[key] = value;
}

} // namespace

RunConfig default_config() {
  RunConfig cfg;
  cfg.city_zip = {{"San Francisco", "94107"},
                  {"San Jose", "95113"},
                  {"Redwood City", "94063"},
                  {"Mountain View", "94041"},
                  {"Palo Alto", "94301"}};
  cfg.sweep_grid = {15, 30, 45, 60, 75, 90, 105, 120};
  cfg.sweep_tree_curves = {20, 60, 100, 140, 180};
  return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig cfg = default_config();
  if (const char* env = std::getenv("BIKECAST_DATA_DIR")) cfg.data_dir = env;

  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(errc::config_invalid, "cannot read config file '" + path + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string text = trim(line);
      if (text.empty() || text[0] == '#') continue;
      size_t eq = text.find('=');
      if (eq == std::string::npos) {
        throw Error(errc::config_invalid,
                    path + ":" + std::to_string(line_no) + ": expected key=value");
      }
      apply_key(cfg, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }
  }
  for (const auto& item : overrides) {
    size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(errc::config_invalid, "override '" + item + "' is not key=value");
    }
    apply_key(cfg, trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }

  auto fill = [&](std::string& field, const char* file) {
    if (field.empty() && !cfg.data_dir.empty()) field = cfg.data_dir + "/" + file;
  };
  fill(cfg.status_path, "status.csv");
  fill(cfg.trip_path, "trip.csv");
  fill(cfg.weather_path, "weather.csv");
  fill(cfg.station_path, "station.csv");

  if (cfg.jobs < 1) throw Error(errc::config_invalid, "jobs must be >= 1");
  if (cfg.tick_seconds <= 0) throw Error(errc::config_invalid, "tick_seconds must be positive");
  if (cfg.min_coverage < 0.0 || cfg.min_coverage > 1.0) {
    throw Error(errc::config_invalid, "min_coverage must be in [0, 1]");
  }
  if (cfg.neighbor_k < 1) throw Error(errc::config_invalid, "neighbor_k must be >= 1");
  if (cfg.memory < 0 || cfg.memory > 7) throw Error(errc::config_invalid, "memory must be 0..7");
  if (cfg.k_folds < 2) throw Error(errc::config_invalid, "k_folds must be >= 2");
  return cfg;
}

} // namespace bikecast
