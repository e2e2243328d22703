#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bikecast/features.hpp"
#include "bikecast/rng.hpp"

using namespace bikecast;

namespace {

timestamp_t ts(int y, int mo, int d, int h = 0, int mi = 0) {
  return to_timestamp({y, mo, d, h, mi, 0});
}

WeatherRecord weather_on(std::int64_t date, const std::string& zip, double temp) {
  WeatherRecord w;
  w.date = date;
  w.zip = zip;
  w.temperature_f = temp;
  w.visibility_miles = 10;
  w.humidity_percent = 60;
  w.wind_speed_mph = 5;
  w.precipitation_inches = 0;
  w.sun_flag = true;
  return w;
}

// Two stations, contiguous counts, every cell present.
SnapshotGrid two_station_grid(size_t n_ticks, timestamp_t start = ts(2014, 7, 14)) {
  SnapshotGrid grid;
  grid.stations = {1, 2};
  grid.first_tick = start;
  grid.n_ticks = n_ticks;
  grid.counts.resize(2 * n_ticks);
  for (size_t k = 0; k < n_ticks; ++k) {
    grid.counts[k] = static_cast<std::int32_t>(k % 9);
    grid.counts[n_ticks + k] = static_cast<std::int32_t>((k * 3 + 1) % 7);
  }
  return grid;
}

} // namespace

TEST_CASE("encode_calendar fields") {
  CalendarFeatures f = encode_calendar(ts(2014, 7, 15, 8, 30));
  CHECK(f.month == 7);
  CHECK(f.day_of_week == 2); // Tuesday
  CHECK(f.time_of_day == 510);

  CHECK(encode_calendar(ts(2019, 3, 4, 0, 0)).time_of_day == 0);

  CalendarFeatures g = encode_calendar(ts(2013, 12, 31, 23, 45));
  CHECK(g.month == 12);
  CHECK(g.day_of_week == 2);
  CHECK(g.time_of_day == 1425);
}

TEST_CASE("weather lookup joins by zip and date with carry-forward") {
  std::int64_t d0 = days_from_civil(2014, 3, 1);
  std::vector<WeatherRecord> records{weather_on(d0, "94107", 60), weather_on(d0 + 1, "94107", 65),
                                     weather_on(d0, "95113", 70)};
  WeatherIndex index(records);
  CHECK(index.lookup("94107", d0 + 1).temperature_f == 65);
  // date missing: previous day carried forward
  CHECK(index.lookup("94107", d0 + 5).temperature_f == 65);
  CHECK(index.lookup("95113", d0 + 2).temperature_f == 70);
  // nothing at or before the first date
  CHECK_THROWS_AS(index.lookup("94107", d0 - 1), Error);
  CHECK_THROWS_AS(index.lookup("99999", d0), Error);
}

TEST_CASE("log transform round trip and clamping") {
  for (int c = 0; c <= 40; ++c) {
    CHECK(from_log_space(to_log_space(c)) == doctest::Approx(c).epsilon(1e-12));
  }
  CHECK(from_log_space(-0.5) == 0.0); // negative predictions clamp to empty
  CHECK(to_log_space(0.0) == 0.0);
}

TEST_CASE("station dataset alignment, target transform and boundaries") {
  SnapshotGrid grid = two_station_grid(40);
  std::int64_t d = days_from_civil(2014, 7, 14);
  WeatherIndex weather(std::vector<WeatherRecord>{weather_on(d, "94107", 61)});
  FeatureOptions options;
  options.horizon_minutes = 15;
  options.memory = 0;
  options.min_rows = 1;
  options.station_zip = {{1, "94107"}, {2, "94107"}};
  std::vector<NeighborSet> neighbors{{1, {2}}, {2, {1}}};

  auto datasets = build_station_datasets(grid, neighbors, weather, options);
  REQUIRE(datasets.size() == 2);
  const StationDataset& ds = datasets[0];
  // last tick emits no row (no t+delta)
  CHECK(ds.X.rows == 39);
  CHECK(ds.feature_names[0] == "own_count");
  CHECK(ds.feature_names[1] == "nbr_2");
  for (size_t r = 0; r < ds.X.rows; ++r) {
    size_t k = ds.ticks[r];
    CHECK(ds.X.at(r, 0) == grid.at(0, k));
    CHECK(ds.X.at(r, 1) == grid.at(1, k));
    // alignment: target tick - feature tick = horizon exactly
    CHECK(ds.y[r] == std::log1p(static_cast<double>(grid.at(0, k + 1))));
  }
  // a zero count at t+delta gives target log1p(0) = 0
  bool saw_zero = false;
  for (size_t r = 0; r < ds.X.rows; ++r) {
    if (grid.at(0, ds.ticks[r] + 1) == 0) {
      CHECK(ds.y[r] == 0.0);
      saw_zero = true;
    }
  }
  CHECK(saw_zero);
}

TEST_CASE("memory features shift the usable rows and reference only the past") {
  SnapshotGrid grid = two_station_grid(40);
  std::int64_t d = days_from_civil(2014, 7, 14);
  WeatherIndex weather(std::vector<WeatherRecord>{weather_on(d, "94107", 61)});
  FeatureOptions options;
  options.horizon_minutes = 30;
  options.memory = 2;
  options.min_rows = 1;
  options.station_zip = {{1, "94107"}, {2, "94107"}};
  std::vector<NeighborSet> neighbors{{1, {}}, {2, {}}};

  auto datasets = build_station_datasets(grid, neighbors, weather, options);
  const StationDataset& ds = datasets[0];
  // first two ticks and the horizon tail emit no rows
  CHECK(ds.X.rows == 40 - 2 - 2);
  CHECK(ds.ticks.front() == 2);
  REQUIRE(ds.feature_names[1] == "mem_t-1");
  REQUIRE(ds.feature_names[2] == "mem_t-2");
  for (size_t r = 0; r < ds.X.rows; ++r) {
    size_t k = ds.ticks[r];
    CHECK(ds.X.at(r, 1) == grid.at(0, k - 1));
    CHECK(ds.X.at(r, 2) == grid.at(0, k - 2));
  }
}

TEST_CASE("rows touching a missing cell are dropped") {
  SnapshotGrid grid = two_station_grid(20);
  grid.at(0, 10) = SnapshotGrid::kMissing; // own count gap
  grid.at(1, 5) = SnapshotGrid::kMissing;  // neighbor gap
  std::int64_t d = days_from_civil(2014, 7, 14);
  WeatherIndex weather(std::vector<WeatherRecord>{weather_on(d, "94107", 61)});
  FeatureOptions options;
  options.horizon_minutes = 15;
  options.min_rows = 1;
  options.station_zip = {{1, "94107"}, {2, "94107"}};
  std::vector<NeighborSet> neighbors{{1, {2}}, {2, {1}}};

  auto datasets = build_station_datasets(grid, neighbors, weather, options);
  const StationDataset& ds = datasets[0];
  for (size_t r = 0; r < ds.X.rows; ++r) {
    CHECK(ds.ticks[r] != 10); // missing own count at t
    CHECK(ds.ticks[r] != 9);  // missing own count at t+delta
    CHECK(ds.ticks[r] != 5);  // missing neighbor at t
  }
  CHECK(ds.X.rows == 20 - 1 - 3);
}

TEST_CASE("station dataset rejects bad horizons and memory") {
  SnapshotGrid grid = two_station_grid(30);
  std::int64_t d = days_from_civil(2014, 7, 14);
  WeatherIndex weather(std::vector<WeatherRecord>{weather_on(d, "94107", 61)});
  FeatureOptions options;
  options.min_rows = 1;
  options.station_zip = {{1, "94107"}, {2, "94107"}};
  std::vector<NeighborSet> neighbors{{1, {}}, {2, {}}};

  options.horizon_minutes = 10; // not a tick multiple
  CHECK_THROWS_AS(build_station_datasets(grid, neighbors, weather, options), Error);
  options.horizon_minutes = 15;
  options.memory = 9;
  CHECK_THROWS_AS(build_station_datasets(grid, neighbors, weather, options), Error);
  options.memory = 0;
  options.min_rows = 1000; // more rows than the grid can give
  CHECK_THROWS_AS(build_station_datasets(grid, neighbors, weather, options), Error);
}

TEST_CASE("two builds from identical inputs are bit-identical") {
  SnapshotGrid grid = two_station_grid(60);
  std::int64_t d = days_from_civil(2014, 7, 14);
  WeatherIndex weather(std::vector<WeatherRecord>{weather_on(d, "94107", 61)});
  FeatureOptions options;
  options.horizon_minutes = 15;
  options.memory = 3;
  options.min_rows = 1;
  options.station_zip = {{1, "94107"}, {2, "94107"}};
  std::vector<NeighborSet> neighbors{{1, {2}}, {2, {1}}};

  auto a = build_station_datasets(grid, neighbors, weather, options);
  auto b = build_station_datasets(grid, neighbors, weather, options, 2);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].X == b[i].X);
    CHECK(a[i].y == b[i].y);
    CHECK(a[i].feature_names == b[i].feature_names);
  }
}

TEST_CASE("region dataset shape and one-hot calendar") {
  SnapshotGrid grid = two_station_grid(50);
  std::int64_t d = days_from_civil(2014, 7, 14);
  WeatherIndex weather(std::vector<WeatherRecord>{weather_on(d, "94107", 61)});
  FeatureOptions options;
  options.horizon_minutes = 15;
  options.min_rows = 1;
  options.station_zip = {{1, "94107"}, {2, "94107"}};
  RegionPartition partition;
  partition.region_count = 1;
  partition.assignment = {{1, 1}, {2, 1}};

  auto datasets = build_region_datasets(grid, partition, weather, options);
  REQUIRE(datasets.size() == 1);
  const RegionDataset& ds = datasets[0];
  CHECK(ds.member_stations == std::vector<int>{1, 2});
  CHECK(ds.Y.cols == 2);
  CHECK(ds.X.rows == ds.Y.rows);
  // columns: 2 member counts + 12 months + 7 dows + tod + 8 weather
  CHECK(ds.X.cols == 2 + 12 + 7 + 1 + 8);
  for (size_t r = 0; r < ds.X.rows; ++r) {
    double month_sum = 0.0, dow_sum = 0.0;
    for (int m = 0; m < 12; ++m) month_sum += ds.X.at(r, 2 + static_cast<size_t>(m));
    for (int w = 0; w < 7; ++w) dow_sum += ds.X.at(r, 14 + static_cast<size_t>(w));
    CHECK(month_sum == 1.0);
    CHECK(dow_sum == 1.0);
    size_t k = ds.ticks[r];
    CHECK(ds.Y.at(r, 0) == std::log1p(static_cast<double>(grid.at(0, k + 1))));
    CHECK(ds.Y.at(r, 1) == std::log1p(static_cast<double>(grid.at(1, k + 1))));
  }
}

TEST_CASE("single-station region degenerates to one response column") {
  SnapshotGrid grid = two_station_grid(50);
  std::int64_t d = days_from_civil(2014, 7, 14);
  WeatherIndex weather(std::vector<WeatherRecord>{weather_on(d, "94107", 61)});
  FeatureOptions options;
  options.horizon_minutes = 15;
  options.min_rows = 1;
  options.station_zip = {{1, "94107"}, {2, "94107"}};
  RegionPartition partition;
  partition.region_count = 2;
  partition.assignment = {{1, 1}, {2, 2}};

  auto datasets = build_region_datasets(grid, partition, weather, options);
  REQUIRE(datasets.size() == 2);
  CHECK(datasets[0].Y.cols == 1);
  CHECK(datasets[1].Y.cols == 1);
}
