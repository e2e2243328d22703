#ifndef BIKECAST_PARSE_HPP
#define BIKECAST_PARSE_HPP

#include <iosfwd>
#include <optional>
#include <set>
#include <string>

#include "bikecast/records.hpp"

namespace bikecast {

// Column mappings are configuration (the core never hard-codes upstream
// header names); the defaults below match the published Bay Area files.

struct StatusColumns {
  char delimiter = ',';
  std::string station_id = "station_id";
  std::string bikes_available = "bikes_available";
  std::string docks_available = "docks_available";
  std::string time = "time";
  std::string time_format = "%Y/%m/%d %H:%M:%S";
};

struct TripColumns {
  char delimiter = ',';
  std::string start_station = "start_station_id";
  std::string end_station = "end_station_id";
  std::string start_time = "start_date";
  std::string end_time = "end_date";
  std::string duration = "duration";
  std::string time_format = "%m/%d/%Y %H:%M";
};

struct WeatherColumns {
  char delimiter = ',';
  std::string date = "date";
  std::string zip = "zip_code";
  std::string temperature = "mean_temperature_f";
  std::string visibility = "mean_visibility_miles";
  std::string humidity = "mean_humidity";
  std::string wind_speed = "mean_wind_speed_mph";
  std::string precipitation = "precipitation_inches";
  std::string events = "events";
  std::string date_format = "%m/%d/%Y";
};

struct StationColumns {
  char delimiter = ',';
  std::string station_id = "id";
  std::string name = "name";
  std::string latitude = "lat";
  std::string longitude = "long";
  std::string dock_count = "dock_count";
  std::string city = "city";
  std::string installation_date = "installation_date";
  std::string date_format = "%m/%d/%Y";
};

// Throws Error(missing_column) when the header lacks a mapped column;
// per-row failures are collected, never thrown.
ParseResult<StatusRecord> parse_status(std::istream& in, const StatusColumns& cols = {});

struct TripParseResult : ParseResult<TripRecord> {
  // Indices into `records` whose endpoints are not all in the known set
  // (retained but flagged; only populated when a set was supplied).
  std::vector<size_t> flagged_unknown;
};
TripParseResult parse_trips(std::istream& in, const TripColumns& cols = {},
                            const std::set<int>* known_stations = nullptr);

ParseResult<WeatherRecord> parse_weather(std::istream& in, const WeatherColumns& cols = {});

ParseResult<StationMeta> parse_stations(std::istream& in, const StationColumns& cols = {});

} // namespace bikecast

#endif
