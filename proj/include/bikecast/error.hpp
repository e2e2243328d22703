#ifndef BIKECAST_ERROR_HPP
#define BIKECAST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bikecast {

enum class errc {
  malformed_row,
  missing_column,
  duplicate_station,
  empty_input,
  all_stations_dropped,
  empty_station_list,
  unknown_station,
  no_weather_history,
  horizon_not_multiple,
  insufficient_data,
  empty_region,
  empty_dataset,
  dimension_mismatch,
  convergence_failure,
  too_few_rows,
  length_mismatch,
  unfitted_model,
  config_invalid,
  missing_upstream_artifact,
  no_results,
  io_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

} // namespace bikecast

#endif
