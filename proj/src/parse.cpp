#include "bikecast/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>

#include "bikecast/csv.hpp"

namespace bikecast {

namespace {

std::optional<std::int64_t> to_int(std::string_view s) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

size_t require_column(const TableReader& reader, const std::string& name) {
  auto idx = reader.column(name);
  if (!idx) throw Error(errc::missing_column, "header lacks column '" + name + "'");
  return *idx;
}

} // namespace

ParseResult<StatusRecord> parse_status(std::istream& in, const StatusColumns& cols) {
  TableReader reader(in, cols.delimiter);
  const size_t c_station = require_column(reader, cols.station_id);
  const size_t c_bikes = require_column(reader, cols.bikes_available);
  const size_t c_docks = require_column(reader, cols.docks_available);
  const size_t c_time = require_column(reader, cols.time);
  const size_t width = std::max({c_station, c_bikes, c_docks, c_time}) + 1;

  ParseResult<StatusRecord> result;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    ++result.rows_read;
    const std::int64_t row = reader.row_index();
    if (fields.size() < width) {
      result.errors.push_back({row, errc::malformed_row, "too few fields"});
      continue;
    }
    auto station = to_int(fields[c_station]);
    auto bikes = to_int(fields[c_bikes]);
    auto docks = to_int(fields[c_docks]);
    auto ts = parse_datetime(fields[c_time], cols.time_format);
    if (!station || !bikes || !docks || !ts) {
      result.errors.push_back({row, errc::malformed_row, "bad integer or datetime"});
      continue;
    }
    if (*bikes < 0 || *docks < 0) {
      result.errors.push_back({row, errc::malformed_row, "negative availability"});
      continue;
    }
    result.records.push_back({static_cast<int>(*station), truncate_to_minute(*ts),
                              static_cast<int>(*bikes), static_cast<int>(*docks)});
  }
  return result;
}

TripParseResult parse_trips(std::istream& in, const TripColumns& cols,
                            const std::set<int>* known_stations) {
  TableReader reader(in, cols.delimiter);
  const size_t c_start = require_column(reader, cols.start_station);
  const size_t c_end = require_column(reader, cols.end_station);
  const size_t c_start_t = require_column(reader, cols.start_time);
  const size_t c_end_t = require_column(reader, cols.end_time);
  const size_t c_dur = require_column(reader, cols.duration);
  const size_t width = std::max({c_start, c_end, c_start_t, c_end_t, c_dur}) + 1;

  TripParseResult result;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    ++result.rows_read;
    const std::int64_t row = reader.row_index();
    if (fields.size() < width) {
      result.errors.push_back({row, errc::malformed_row, "too few fields"});
      continue;
    }
    auto start = to_int(fields[c_start]);
    auto end = to_int(fields[c_end]);
    auto dur = to_int(fields[c_dur]);
    auto t0 = parse_datetime(fields[c_start_t], cols.time_format);
    auto t1 = parse_datetime(fields[c_end_t], cols.time_format);
    if (!start || !end || !dur || !t0 || !t1) {
      result.errors.push_back({row, errc::malformed_row, "bad integer or datetime"});
      continue;
    }
    if (*dur < 0 || *t1 < *t0) {
      result.errors.push_back({row, errc::malformed_row, "negative duration or reversed times"});
      continue;
    }
    TripRecord rec{static_cast<int>(*start), static_cast<int>(*end), *t0, *t1, *dur};
    if (known_stations &&
        (!known_stations->count(rec.start_station) || !known_stations->count(rec.end_station))) {
      result.flagged_unknown.push_back(result.records.size());
    }
    result.records.push_back(rec);
  }
  return result;
}

ParseResult<WeatherRecord> parse_weather(std::istream& in, const WeatherColumns& cols) {
  TableReader reader(in, cols.delimiter);
  const size_t c_date = require_column(reader, cols.date);
  const size_t c_zip = require_column(reader, cols.zip);
  const size_t c_temp = require_column(reader, cols.temperature);
  const size_t c_vis = require_column(reader, cols.visibility);
  const size_t c_hum = require_column(reader, cols.humidity);
  const size_t c_wind = require_column(reader, cols.wind_speed);
  const size_t c_precip = require_column(reader, cols.precipitation);
  const size_t c_events = require_column(reader, cols.events);
  const size_t width =
      std::max({c_date, c_zip, c_temp, c_vis, c_hum, c_wind, c_precip, c_events}) + 1;

  ParseResult<WeatherRecord> result;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    ++result.rows_read;
    const std::int64_t row = reader.row_index();
    if (fields.size() < width) {
      result.errors.push_back({row, errc::malformed_row, "too few fields"});
      continue;
    }
    auto date = parse_date(fields[c_date], cols.date_format);
    auto temp = to_double(fields[c_temp]);
    auto vis = to_double(fields[c_vis]);
    auto hum = to_double(fields[c_hum]);
    auto wind = to_double(fields[c_wind]);
    // The published file writes "T" for trace precipitation.
    std::optional<double> precip = fields[c_precip] == "T"
                                       ? std::optional<double>(0.01)
                                       : to_double(fields[c_precip]);
    if (!date || !temp || !vis || !hum || !wind || !precip) {
      result.errors.push_back({row, errc::malformed_row, "bad number or date"});
      continue;
    }
    if (*hum < 0.0 || *hum > 100.0 || *precip < 0.0) {
      result.errors.push_back({row, errc::malformed_row, "humidity or precipitation out of range"});
      continue;
    }
    WeatherRecord rec;
    rec.date = *date;
    rec.zip = fields[c_zip];
    rec.temperature_f = *temp;
    rec.visibility_miles = *vis;
    rec.humidity_percent = *hum;
    rec.wind_speed_mph = *wind;
    rec.precipitation_inches = *precip;
    std::string events = lower(fields[c_events]);
    rec.rain_flag = events.find("rain") != std::string::npos;
    rec.fog_flag = events.find("fog") != std::string::npos;
    rec.sun_flag = !rec.rain_flag && !rec.fog_flag;
    result.records.push_back(std::move(rec));
  }
  return result;
}

ParseResult<StationMeta> parse_stations(std::istream& in, const StationColumns& cols) {
  TableReader reader(in, cols.delimiter);
  const size_t c_id = require_column(reader, cols.station_id);
  const size_t c_name = require_column(reader, cols.name);
  const size_t c_lat = require_column(reader, cols.latitude);
  const size_t c_lon = require_column(reader, cols.longitude);
  const size_t c_docks = require_column(reader, cols.dock_count);
  const size_t c_city = require_column(reader, cols.city);
  const size_t c_install = require_column(reader, cols.installation_date);
  const size_t width = std::max({c_id, c_name, c_lat, c_lon, c_docks, c_city, c_install}) + 1;

  ParseResult<StationMeta> result;
  std::set<int> seen;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    ++result.rows_read;
    const std::int64_t row = reader.row_index();
    if (fields.size() < width) {
      result.errors.push_back({row, errc::malformed_row, "too few fields"});
      continue;
    }
    auto id = to_int(fields[c_id]);
    auto lat = to_double(fields[c_lat]);
    auto lon = to_double(fields[c_lon]);
    auto docks = to_int(fields[c_docks]);
    auto install = parse_date(fields[c_install], cols.date_format);
    if (!id || !lat || !lon || !docks || !install) {
      result.errors.push_back({row, errc::malformed_row, "bad number or date"});
      continue;
    }
    if (*docks <= 0 || *lat < -90.0 || *lat > 90.0 || *lon < -180.0 || *lon > 180.0) {
      result.errors.push_back({row, errc::malformed_row, "dock count or coordinates out of range"});
      continue;
    }
    if (!seen.insert(static_cast<int>(*id)).second) {
      result.errors.push_back(
          {row, errc::duplicate_station, "station id " + fields[c_id] + " repeated"});
      continue;
    }
    StationMeta meta;
    meta.station_id = static_cast<int>(*id);
    meta.name = fields[c_name];
    meta.latitude = *lat;
    meta.longitude = *lon;
    meta.dock_count = static_cast<int>(*docks);
    meta.city = fields[c_city];
    meta.installation_date = *install;
    result.records.push_back(std::move(meta));
  }
  return result;
}

} // namespace bikecast
