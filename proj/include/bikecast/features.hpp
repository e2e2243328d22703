#ifndef BIKECAST_FEATURES_HPP
#define BIKECAST_FEATURES_HPP

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bikecast/graph.hpp"
#include "bikecast/grid.hpp"
#include "bikecast/matrix.hpp"
#include "bikecast/records.hpp"

namespace bikecast {

struct CalendarFeatures {
  int month = 1;       // 1..12
  int day_of_week = 1; // Monday = 1 .. Sunday = 7
  int time_of_day = 0; // minutes since midnight
};

CalendarFeatures encode_calendar(timestamp_t t);

// Daily weather keyed by (zip, date), with prior-date carry-forward.
class WeatherIndex {
 public:
  explicit WeatherIndex(std::span<const WeatherRecord> records);

  // The record for `date`, or the most recent prior date for the same
  // zip. Throws NoWeatherHistory when the zip has no record at or
  // before the date.
  const WeatherRecord& lookup(const std::string& zip, std::int64_t date) const;

 private:
  std::map<std::string, std::map<std::int64_t, WeatherRecord>> by_zip_;
};

// Supervised design matrix for one station: predictors at tick t, target
// log1p(count at t + horizon). Columns, in order: own count, neighbor
// counts (NeighborSet order), memory counts t-1..t-m, month, day of
// week, time of day, six numeric weather fields, three event flags.
struct StationDataset {
  int station_id = 0;
  std::vector<std::string> feature_names;
  Matrix X;
  std::vector<double> y; // log1p counts
  int horizon_minutes = 0;
  int memory = 0;
  std::vector<size_t> ticks; // grid tick index of each row (row provenance)
};

// Multivariate block for one region: member counts at t plus calendar
// and weather as X; log1p member counts at t + horizon as Y. Month and
// day of week are one-hot here; a linear model must not read ordinal
// distance into category codes.
struct RegionDataset {
  int region = 0;
  std::vector<int> member_stations; // ascending
  std::vector<std::string> feature_names;
  Matrix X;
  Matrix Y;
  int horizon_minutes = 0;
  std::vector<size_t> ticks;
};

struct FeatureOptions {
  int horizon_minutes = 15;
  int memory = 0;                  // 0..7 past ticks appended
  size_t min_rows = 100;           // InsufficientData below this
  std::map<int, std::string> station_zip; // station id -> weather zip
};

std::vector<StationDataset> build_station_datasets(const SnapshotGrid& grid,
                                                   std::span<const NeighborSet> neighbors,
                                                   const WeatherIndex& weather,
                                                   const FeatureOptions& options, int jobs = 1);

std::vector<RegionDataset> build_region_datasets(const SnapshotGrid& grid,
                                                 const RegionPartition& partition,
                                                 const WeatherIndex& weather,
                                                 const FeatureOptions& options, int jobs = 1);

// log1p target transform and its inverse back to bike space; negative
// model outputs clamp to an empty dock.
inline double to_log_space(double bikes) { return std::log1p(bikes); }
double from_log_space(double log_value);

void write_dataset_csv(const StationDataset& ds, std::ostream& out);

} // namespace bikecast

#endif
