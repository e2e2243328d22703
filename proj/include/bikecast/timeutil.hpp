#ifndef BIKECAST_TIMEUTIL_HPP
#define BIKECAST_TIMEUTIL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bikecast {

// Naive local timestamps: seconds since 1970-01-01 00:00:00 of the civil
// calendar, no timezone. The data carries no zone; daylight-saving
// duplicates collapse onto the same civil instant (first occurrence).
using timestamp_t = std::int64_t;

struct CivilDateTime {
  int year = 1970;
  int month = 1; // 1..12
  int day = 1;   // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;
};

std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

timestamp_t to_timestamp(const CivilDateTime& c);
CivilDateTime from_timestamp(timestamp_t t);

// ISO 8601 weekday, Monday = 1 .. Sunday = 7.
int day_of_week(timestamp_t t);

inline timestamp_t truncate_to_minute(timestamp_t t) { return t - (((t % 60) + 60) % 60); }
inline std::int64_t date_of(timestamp_t t) {
  // Civil day index (days since 1970-01-01), usable as a date key.
  std::int64_t d = t / 86400;
  if (t % 86400 < 0) --d;
  return d;
}

// Parses `text` against a strptime-like format with %Y %m %d %H %M %S
// tokens. Month/day/hour accept one or two digits (the trip file writes
// "8/29/2013 14:13"). Returns nullopt on any mismatch or invalid date.
std::optional<timestamp_t> parse_datetime(std::string_view text, std::string_view format);

// Date-only convenience: parses with the given format, time fields zero.
std::optional<std::int64_t> parse_date(std::string_view text, std::string_view format);

std::string format_iso(timestamp_t t);       // "2013-08-29 12:06:00"
std::string format_iso_date(std::int64_t day); // "2013-08-29"

} // namespace bikecast

#endif
