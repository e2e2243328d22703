#ifndef BIKECAST_RECORDS_HPP
#define BIKECAST_RECORDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bikecast/error.hpp"
#include "bikecast/timeutil.hpp"

namespace bikecast {

struct StatusRecord {
  int station_id = 0;
  timestamp_t timestamp = 0; // minute resolution
  int bikes_available = 0;
  int docks_available = 0;
};

struct TripRecord {
  int start_station = 0;
  int end_station = 0;
  timestamp_t start_time = 0;
  timestamp_t end_time = 0;
  std::int64_t duration_seconds = 0;
};

struct WeatherRecord {
  std::int64_t date = 0; // civil day index
  std::string zip;
  double temperature_f = 0.0; // daily means
  double visibility_miles = 0.0;
  double humidity_percent = 0.0;
  double wind_speed_mph = 0.0;
  double precipitation_inches = 0.0;
  bool rain_flag = false;
  bool fog_flag = false;
  bool sun_flag = false;
};

struct StationMeta {
  int station_id = 0;
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;
  int dock_count = 0;
  std::string city;
  std::int64_t installation_date = 0; // civil day index
};

struct RowError {
  std::int64_t row = 0; // 0-based data row index
  errc code = errc::malformed_row;
  std::string message;
};

// Parsers are total over their error domain: every data row lands either
// in `records` or in `errors`, and rows_read = records + errors.
template <typename T>
struct ParseResult {
  std::vector<T> records;
  std::vector<RowError> errors;
  std::int64_t rows_read = 0;
};

} // namespace bikecast

#endif
