#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bikecast/config.hpp"
#include "bikecast/datagen.hpp"
#include "bikecast/manifest.hpp"
#include "bikecast/parse.hpp"
#include "bikecast/pipeline.hpp"

using namespace bikecast;
namespace fs = std::filesystem;

namespace {

// One small synthetic dataset shared by every case in this binary.
const std::string& dataset_dir() {
  static const std::string dir = [] {
    std::string path = (fs::temp_directory_path() / "bikecast_test_data").string();
    DatagenOptions options;
    options.out_dir = path;
    options.days = 60;
    options.seed = 424242;
    generate_dataset(options);
    return path;
  }();
  return dir;
}

RunConfig smoke_config(const std::string& out_dir) {
  std::vector<std::string> overrides{
      "data.dir=" + dataset_dir(),
      "out.dir=" + out_dir,
      "ingest.stations=41,42,43,44,45,46",
      "train.n_trees=8",
      "train.seed=5",
      "eval.k_folds=3",
      "features.min_rows=50",
      "sweep.grid=15,30",
      "sweep.tree_curves=4,8",
  };
  return load_config("", overrides);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("generated files parse totally with zero row errors") {
  const auto& dir = dataset_dir();
  {
    std::ifstream in(fs::path(dir) / "status.csv");
    auto parsed = parse_status(in);
    CHECK(parsed.errors.empty());
    CHECK(parsed.rows_read ==
          static_cast<std::int64_t>(parsed.records.size() + parsed.errors.size()));
    CHECK(parsed.records.size() > 100000);
  }
  {
    std::ifstream in(fs::path(dir) / "trip.csv");
    auto parsed = parse_trips(in);
    CHECK(parsed.errors.empty());
    CHECK(parsed.records.size() > 10000);
  }
  {
    std::ifstream in(fs::path(dir) / "weather.csv");
    auto parsed = parse_weather(in);
    CHECK(parsed.errors.empty());
    CHECK(parsed.records.size() == 60 * 5);
  }
  {
    std::ifstream in(fs::path(dir) / "station.csv");
    auto parsed = parse_stations(in);
    CHECK(parsed.errors.empty());
    CHECK(parsed.records.size() == 71);
  }
}

TEST_CASE("stage pipeline end to end on a station subset") {
  const std::string out = (fs::temp_directory_path() / "bikecast_test_out").string();
  fs::remove_all(out);
  RunConfig cfg = smoke_config(out);

  REQUIRE(run_command("ingest", cfg) == 0);
  CHECK(fs::exists(fs::path(out) / "grid.csv"));
  CHECK(fs::exists(fs::path(out) / "cleaning.json"));
  RunManifest ingest_manifest = read_manifest((fs::path(out) / "manifest_ingest.json").string());
  CHECK(ingest_manifest.counts.at("status_rows_read") > 0);
  CHECK(ingest_manifest.counts.at("stations_kept") == 6);

  REQUIRE(run_command("graph", cfg) == 0);
  CHECK(fs::exists(fs::path(out) / "adjacency.csv"));
  CHECK(fs::exists(fs::path(out) / "neighbors.csv"));
  CHECK(fs::exists(fs::path(out) / "regions.csv"));

  REQUIRE(run_command("features", cfg) == 0);
  CHECK(fs::exists(fs::path(out) / "features" / "station_41.csv"));
  CHECK(fs::exists(fs::path(out) / "features_manifest.json"));

  REQUIRE(run_command("train", cfg) == 0);
  CHECK(fs::exists(fs::path(out) / "models" / "rf_station_41.json"));
  CHECK(fs::exists(fs::path(out) / "importance_rf.csv"));

  REQUIRE(run_command("evaluate", cfg) == 0);
  CHECK(fs::exists(fs::path(out) / "eval_rf.json"));
  CHECK(fs::exists(fs::path(out) / "eval_rf_stations.csv"));

  REQUIRE(run_command("sweep", cfg) == 0);
  CHECK(fs::exists(fs::path(out) / "fig2_rf_horizon_trees.csv"));

  REQUIRE(run_command("report", cfg) == 0);
  CHECK(fs::exists(fs::path(out) / "summary.txt"));
  CHECK(fs::exists(fs::path(out) / "summary.csv"));
  CHECK(fs::exists(fs::path(out) / "fig4_maxae.csv"));

  // manifest checksums describe the artifacts exactly
  RunManifest graph_manifest = read_manifest((fs::path(out) / "manifest_graph.json").string());
  for (const auto& [path, checksum] : graph_manifest.output_checksums) {
    CHECK(file_checksum(path) == checksum);
  }
}

TEST_CASE("stages fail with located errors when upstream artifacts are missing") {
  const std::string out = (fs::temp_directory_path() / "bikecast_test_missing").string();
  fs::remove_all(out);
  RunConfig cfg = smoke_config(out);
  CHECK(run_command("train", cfg) == 2);    // features missing
  CHECK(run_command("graph", cfg) == 2);    // grid missing
  CHECK(run_command("report", cfg) == 2);   // no eval reports
  CHECK(run_command("bogus", cfg) == 1);
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(load_config("", {"no_such_key=1"}), Error);
  CHECK_THROWS_AS(load_config("", {"eval.fold_mode=sideways"}), Error);
  CHECK_THROWS_AS(load_config("", {"jobs=0"}), Error);
  RunConfig cfg = load_config("", {"train.learner=lsboost", "features.memory=3"});
  CHECK(cfg.hp.kind == LearnerKind::lsboost);
  CHECK(cfg.memory == 3);
}

TEST_CASE("re-running stages reproduces artifacts byte for byte") {
  const std::string out_a = (fs::temp_directory_path() / "bikecast_det_a").string();
  const std::string out_b = (fs::temp_directory_path() / "bikecast_det_b").string();
  fs::remove_all(out_a);
  fs::remove_all(out_b);
  for (const std::string& out : {out_a, out_b}) {
    RunConfig cfg = smoke_config(out);
    REQUIRE(run_command("ingest", cfg) == 0);
    REQUIRE(run_command("graph", cfg) == 0);
    REQUIRE(run_command("features", cfg) == 0);
    REQUIRE(run_command("evaluate", cfg) == 0);
  }
  for (const char* name : {"grid.csv", "cleaning.json", "adjacency.csv", "neighbors.csv",
                           "regions.csv", "features/station_41.csv", "features_manifest.json",
                           "eval_rf_stations.csv"}) {
    CHECK_MESSAGE(slurp(fs::path(out_a) / name) == slurp(fs::path(out_b) / name), name);
  }
  // the eval JSON differs only in measured wall seconds
  std::string a = slurp(fs::path(out_a) / "eval_rf.json");
  std::string b = slurp(fs::path(out_b) / "eval_rf.json");
  auto strip_wall = [](std::string text) {
    size_t pos = text.find("\"wall_seconds\"");
    REQUIRE(pos != std::string::npos);
    size_t end = text.find('\n', pos);
    text.erase(pos, end - pos);
    return text;
  };
  CHECK(strip_wall(a) == strip_wall(b));
}
