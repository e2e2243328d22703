#include "bikecast/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "bikecast/csv.hpp"
#include "bikecast/parallel.hpp"

namespace bikecast {

CalendarFeatures encode_calendar(timestamp_t t) {
  CivilDateTime c = from_timestamp(t);
  CalendarFeatures f;
  f.month = c.month;
  f.day_of_week = day_of_week(t);
  f.time_of_day = c.hour * 60 + c.minute;
  return f;
}

WeatherIndex::WeatherIndex(std::span<const WeatherRecord> records) {
  for (const auto& rec : records) by_zip_[rec.zip][rec.date] = rec;
}

const WeatherRecord& WeatherIndex::lookup(const std::string& zip, std::int64_t date) const {
  auto zit = by_zip_.find(zip);
  if (zit == by_zip_.end()) {
    throw Error(errc::no_weather_history, "no weather for zip " + zip);
  }
  const auto& by_date = zit->second;
  auto it = by_date.upper_bound(date);
  if (it == by_date.begin()) {
    throw Error(errc::no_weather_history,
                "no weather at or before " + format_iso_date(date) + " for zip " + zip);
  }
  return std::prev(it)->second;
}

double from_log_space(double log_value) {
  double bikes = std::expm1(log_value);
  return bikes < 0.0 ? 0.0 : bikes;
}

namespace {

constexpr const char* kWeatherNames[] = {"temperature_f",    "visibility_miles",
                                         "humidity_percent", "wind_speed_mph",
                                         "precipitation_inches", "rain", "fog", "sun"};

void append_weather(const WeatherRecord& w, std::vector<double>& row) {
  row.push_back(w.temperature_f);
  row.push_back(w.visibility_miles);
  row.push_back(w.humidity_percent);
  row.push_back(w.wind_speed_mph);
  row.push_back(w.precipitation_inches);
  row.push_back(w.rain_flag ? 1.0 : 0.0);
  row.push_back(w.fog_flag ? 1.0 : 0.0);
  row.push_back(w.sun_flag ? 1.0 : 0.0);
}

const std::string& zip_for(const FeatureOptions& options, int station_id) {
  auto it = options.station_zip.find(station_id);
  if (it == options.station_zip.end()) {
    throw Error(errc::config_invalid, "no weather zip configured for station " +
                                          std::to_string(station_id));
  }
  return it->second;
}

size_t horizon_ticks(const SnapshotGrid& grid, int horizon_minutes) {
  std::int64_t seconds = static_cast<std::int64_t>(horizon_minutes) * 60;
  if (horizon_minutes <= 0 || seconds % grid.tick_seconds != 0) {
    throw Error(errc::horizon_not_multiple,
                "horizon " + std::to_string(horizon_minutes) + " min is not a positive multiple of " +
                    std::to_string(grid.tick_seconds) + " s ticks");
  }
  return static_cast<size_t>(seconds / grid.tick_seconds);
}

} // namespace

std::vector<StationDataset> build_station_datasets(const SnapshotGrid& grid,
                                                   std::span<const NeighborSet> neighbors,
                                                   const WeatherIndex& weather,
                                                   const FeatureOptions& options, int jobs) {
  const size_t delta = horizon_ticks(grid, options.horizon_minutes);
  if (options.memory < 0 || options.memory > 7) {
    throw Error(errc::config_invalid, "memory must be within 0..7");
  }
  const size_t m = static_cast<size_t>(options.memory);

  std::vector<StationDataset> out(neighbors.size());
  parallel_for(neighbors.size(), jobs, [&](size_t job) {
    const NeighborSet& nbr = neighbors[job];
    int s = grid.station_index(nbr.station_id);
    if (s < 0) throw Error(errc::unknown_station, "station " + std::to_string(nbr.station_id) +
                                                      " not in grid");
    std::vector<int> nbr_idx;
    nbr_idx.reserve(nbr.neighbors.size());
    for (int id : nbr.neighbors) {
      int idx = grid.station_index(id);
      if (idx < 0) throw Error(errc::unknown_station, "neighbor " + std::to_string(id) +
                                                          " not in grid");
      nbr_idx.push_back(idx);
    }
    const std::string& zip = zip_for(options, nbr.station_id);

    StationDataset ds;
    ds.station_id = nbr.station_id;
    ds.horizon_minutes = options.horizon_minutes;
    ds.memory = options.memory;
    ds.feature_names.push_back("own_count");
    for (int id : nbr.neighbors) ds.feature_names.push_back("nbr_" + std::to_string(id));
    for (size_t i = 1; i <= m; ++i) ds.feature_names.push_back("mem_t-" + std::to_string(i));
    ds.feature_names.insert(ds.feature_names.end(), {"month", "day_of_week", "time_of_day"});
    for (const char* name : kWeatherNames) ds.feature_names.push_back(name);

    std::vector<double> row;
    std::vector<double> flat;
    std::vector<double> targets;
    const size_t own_row = static_cast<size_t>(s) * grid.n_ticks;
    for (size_t k = m; k + delta < grid.n_ticks; ++k) {
      bool valid = grid.counts[own_row + k + delta] != SnapshotGrid::kMissing;
      for (size_t back = 0; back <= m && valid; ++back) {
        valid = grid.counts[own_row + k - back] != SnapshotGrid::kMissing;
      }
      for (size_t j = 0; j < nbr_idx.size() && valid; ++j) {
        valid = grid.at(static_cast<size_t>(nbr_idx[j]), k) != SnapshotGrid::kMissing;
      }
      if (!valid) continue;

      const timestamp_t tick = grid.tick(k);
      const WeatherRecord* w;
      try {
        w = &weather.lookup(zip, date_of(tick));
      } catch (const Error&) {
        continue; // before the first weather date: incomplete row, dropped
      }
      row.clear();
      row.push_back(grid.counts[own_row + k]);
      for (int idx : nbr_idx) row.push_back(grid.at(static_cast<size_t>(idx), k));
      for (size_t back = 1; back <= m; ++back) row.push_back(grid.counts[own_row + k - back]);
      CalendarFeatures cal = encode_calendar(tick);
      row.push_back(cal.month);
      row.push_back(cal.day_of_week);
      row.push_back(cal.time_of_day);
      append_weather(*w, row);

      flat.insert(flat.end(), row.begin(), row.end());
      targets.push_back(to_log_space(grid.counts[own_row + k + delta]));
      ds.ticks.push_back(k);
    }

    if (targets.size() < options.min_rows) {
      throw Error(errc::insufficient_data,
                  "station " + std::to_string(nbr.station_id) + " has " +
                      std::to_string(targets.size()) + " usable rows (< " +
                      std::to_string(options.min_rows) + ")");
    }
    ds.X.rows = targets.size();
    ds.X.cols = ds.feature_names.size();
    ds.X.data = std::move(flat);
    ds.y = std::move(targets);
    out[job] = std::move(ds);
  });
  return out;
}

std::vector<RegionDataset> build_region_datasets(const SnapshotGrid& grid,
                                                 const RegionPartition& partition,
                                                 const WeatherIndex& weather,
                                                 const FeatureOptions& options, int jobs) {
  const size_t delta = horizon_ticks(grid, options.horizon_minutes);

  auto regions = partition.members();
  std::vector<RegionDataset> out(regions.size());
  parallel_for(regions.size(), jobs, [&](size_t r) {
    std::vector<int> members;
    for (int id : regions[r]) {
      if (grid.station_index(id) >= 0) members.push_back(id);
    }
    if (members.empty()) {
      throw Error(errc::empty_region, "region " + std::to_string(r + 1) + " has no grid stations");
    }
    std::vector<size_t> member_idx;
    member_idx.reserve(members.size());
    for (int id : members) member_idx.push_back(static_cast<size_t>(grid.station_index(id)));
    const std::string& zip = zip_for(options, members.front());

    RegionDataset ds;
    ds.region = static_cast<int>(r + 1);
    ds.member_stations = members;
    ds.horizon_minutes = options.horizon_minutes;
    for (int id : members) ds.feature_names.push_back("cnt_" + std::to_string(id));
    for (int mo = 1; mo <= 12; ++mo) ds.feature_names.push_back("month_" + std::to_string(mo));
    for (int d = 1; d <= 7; ++d) ds.feature_names.push_back("dow_" + std::to_string(d));
    ds.feature_names.push_back("time_of_day");
    for (const char* name : kWeatherNames) ds.feature_names.push_back(name);

    std::vector<double> flat_x;
    std::vector<double> flat_y;
    for (size_t k = 0; k + delta < grid.n_ticks; ++k) {
      bool valid = true;
      for (size_t idx : member_idx) {
        if (grid.at(idx, k) == SnapshotGrid::kMissing ||
            grid.at(idx, k + delta) == SnapshotGrid::kMissing) {
          valid = false;
          break;
        }
      }
      if (!valid) continue;
      const timestamp_t tick = grid.tick(k);
      const WeatherRecord* w;
      try {
        w = &weather.lookup(zip, date_of(tick));
      } catch (const Error&) {
        continue;
      }

      for (size_t idx : member_idx) flat_x.push_back(grid.at(idx, k));
      CalendarFeatures cal = encode_calendar(tick);
      for (int mo = 1; mo <= 12; ++mo) flat_x.push_back(mo == cal.month ? 1.0 : 0.0);
      for (int d = 1; d <= 7; ++d) flat_x.push_back(d == cal.day_of_week ? 1.0 : 0.0);
      flat_x.push_back(cal.time_of_day);
      append_weather(*w, flat_x);
      for (size_t idx : member_idx) flat_y.push_back(to_log_space(grid.at(idx, k + delta)));
      ds.ticks.push_back(k);
    }

    if (ds.ticks.size() < options.min_rows) {
      throw Error(errc::insufficient_data, "region " + std::to_string(r + 1) + " has " +
                                               std::to_string(ds.ticks.size()) + " usable rows");
    }
    ds.X.rows = ds.ticks.size();
    ds.X.cols = ds.feature_names.size();
    ds.X.data = std::move(flat_x);
    ds.Y.rows = ds.ticks.size();
    ds.Y.cols = members.size();
    ds.Y.data = std::move(flat_y);
    out[r] = std::move(ds);
  });
  return out;
}

void write_dataset_csv(const StationDataset& ds, std::ostream& out) {
  for (const auto& name : ds.feature_names) out << name << ',';
  out << "target\n";
  for (size_t r = 0; r < ds.X.rows; ++r) {
    for (size_t c = 0; c < ds.X.cols; ++c) out << format_double(ds.X.at(r, c)) << ',';
    out << format_double(ds.y[r]) << '\n';
  }
}

} // namespace bikecast
