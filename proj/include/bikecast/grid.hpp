#ifndef BIKECAST_GRID_HPP
#define BIKECAST_GRID_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "bikecast/records.hpp"

namespace bikecast {

// Per-station bike counts on a uniform time grid. Cells hold the last
// observed count at or before the tick, or kMissing.
struct SnapshotGrid {
  static constexpr std::int32_t kMissing = -1;

  std::vector<int> stations;     // sorted, no duplicates
  timestamp_t first_tick = 0;
  std::int64_t tick_seconds = 900;
  size_t n_ticks = 0;
  std::vector<std::int32_t> counts; // station-major: [s * n_ticks + k]

  timestamp_t tick(size_t k) const { return first_tick + static_cast<std::int64_t>(k) * tick_seconds; }
  std::int32_t at(size_t station_idx, size_t k) const { return counts[station_idx * n_ticks + k]; }
  std::int32_t& at(size_t station_idx, size_t k) { return counts[station_idx * n_ticks + k]; }
  std::span<const std::int32_t> station_row(size_t station_idx) const {
    return {counts.data() + station_idx * n_ticks, n_ticks};
  }
  // Index of a station id, or -1.
  int station_index(int station_id) const;
};

// Aligns observations onto a tick grid: tick values are the last
// observation at or before the tick; ticks whose nearest prior
// observation is older than max_gap are missing. The grid spans
// ceil(min time) .. ceil(max time) on tick boundaries.
SnapshotGrid resample_grid(std::span<const StatusRecord> records, std::int64_t tick_seconds = 900,
                           std::int64_t max_gap_seconds = 3600, int jobs = 1);

struct StationRemoval {
  int station_id = 0;
  double coverage = 0.0;
};

struct CleanResult {
  SnapshotGrid grid;
  std::vector<StationRemoval> removed;
  size_t ticks_before = 0;
  size_t ticks_after = 0;
  size_t shared_ticks = 0; // ticks where every retained station reports
};

// Drops stations whose in-service reliability (non-missing fraction
// between their first and last report) is below min_coverage, then
// trims the grid to the interval where every retained station reports.
// Runs to a fixpoint, so the operation is idempotent.
CleanResult clean_stations(const SnapshotGrid& grid, double min_coverage = 0.9);

// Sub-grid over a station subset and a closed time window (pass the
// full range to keep all ticks). Station ids absent from the grid are
// an error.
SnapshotGrid restrict_grid(const SnapshotGrid& grid, std::span<const int> station_ids,
                           timestamp_t from, timestamp_t to);

void write_grid_csv(const SnapshotGrid& grid, std::ostream& out);
SnapshotGrid read_grid_csv(std::istream& in);

} // namespace bikecast

#endif
