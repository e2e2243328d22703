#ifndef BIKECAST_DATAGEN_HPP
#define BIKECAST_DATAGEN_HPP

#include <cstdint>
#include <string>

namespace bikecast {

// Writes a synthetic docked bike-share dataset with the same schema,
// headers and datetime formats as the public Bay Area files, for
// running the pipeline and its tests offline. The network shape mirrors
// the published system: 70 long-lived stations across five cities, a
// two-year minute-level status feed sampled sparsely (change events
// plus heartbeats), trips overwhelmingly within one city, late station
// installs that shorten the all-stations window, and one unreliable
// station the cleaning step should reject.
struct DatagenOptions {
  std::string out_dir;
  std::uint64_t seed = 20130829;
  int days = 733; // 2013-08-29 .. 2015-08-31
  double trips_per_window = 9.5; // system-wide demand per 15 min
};

struct DatagenSummary {
  std::size_t station_rows = 0;
  std::size_t status_rows = 0;
  std::size_t trip_rows = 0;
  std::size_t weather_rows = 0;
};

DatagenSummary generate_dataset(const DatagenOptions& options);

} // namespace bikecast

#endif
