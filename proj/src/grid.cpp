#include "bikecast/grid.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "bikecast/csv.hpp"
#include "bikecast/parallel.hpp"

namespace bikecast {

int SnapshotGrid::station_index(int station_id) const {
  auto it = std::lower_bound(stations.begin(), stations.end(), station_id);
  if (it == stations.end() || *it != station_id) return -1;
  return static_cast<int>(it - stations.begin());
}

namespace {

timestamp_t ceil_to_tick(timestamp_t t, std::int64_t spacing) {
  timestamp_t q = t / spacing;
  if (t % spacing > 0) ++q; // toward-zero division is already the ceiling for t < 0
  return q * spacing;
}

} // namespace

SnapshotGrid resample_grid(std::span<const StatusRecord> records, std::int64_t tick_seconds,
                           std::int64_t max_gap_seconds, int jobs) {
  if (records.empty()) throw Error(errc::empty_input, "no status records");

  timestamp_t min_ts = std::numeric_limits<timestamp_t>::max();
  timestamp_t max_ts = std::numeric_limits<timestamp_t>::min();
  for (const auto& r : records) {
    min_ts = std::min(min_ts, r.timestamp);
    max_ts = std::max(max_ts, r.timestamp);
  }

  SnapshotGrid grid;
  grid.tick_seconds = tick_seconds;
  grid.first_tick = ceil_to_tick(min_ts, tick_seconds);
  timestamp_t last_tick = ceil_to_tick(max_ts, tick_seconds);
  grid.n_ticks = static_cast<size_t>((last_tick - grid.first_tick) / tick_seconds) + 1;

  // Group record indices per station, keeping file order within a station
  // so that equal timestamps resolve to the later row.
  std::map<int, std::vector<size_t>> per_station;
  for (size_t i = 0; i < records.size(); ++i) per_station[records[i].station_id].push_back(i);

  grid.stations.reserve(per_station.size());
  for (const auto& [id, idx] : per_station) grid.stations.push_back(id);
  grid.counts.assign(grid.stations.size() * grid.n_ticks, SnapshotGrid::kMissing);

  std::vector<const std::vector<size_t>*> groups;
  groups.reserve(per_station.size());
  for (const auto& [id, idx] : per_station) groups.push_back(&idx);

  parallel_for(grid.stations.size(), jobs, [&](size_t s) {
    std::vector<size_t> order = *groups[s];
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return records[a].timestamp < records[b].timestamp;
    });
    size_t next = 0; // first record with timestamp > current tick
    for (size_t k = 0; k < grid.n_ticks; ++k) {
      const timestamp_t tick = grid.tick(k);
      while (next < order.size() && records[order[next]].timestamp <= tick) ++next;
      if (next == 0) continue; // nothing observed yet
      const StatusRecord& last = records[order[next - 1]];
      if (tick - last.timestamp <= max_gap_seconds) {
        grid.at(s, k) = last.bikes_available;
      }
    }
  });
  return grid;
}

namespace {

struct LiveRange {
  std::int64_t first = -1;
  std::int64_t last = -1;
  size_t non_missing = 0;
  double coverage() const {
    if (first < 0) return 0.0;
    return static_cast<double>(non_missing) / static_cast<double>(last - first + 1);
  }
};

LiveRange live_range(const SnapshotGrid& grid, size_t s) {
  LiveRange r;
  auto row = grid.station_row(s);
  for (size_t k = 0; k < row.size(); ++k) {
    if (row[k] == SnapshotGrid::kMissing) continue;
    if (r.first < 0) r.first = static_cast<std::int64_t>(k);
    r.last = static_cast<std::int64_t>(k);
    ++r.non_missing;
  }
  return r;
}

SnapshotGrid subgrid(const SnapshotGrid& grid, const std::vector<size_t>& keep, size_t k_lo,
                     size_t k_hi) {
  SnapshotGrid out;
  out.tick_seconds = grid.tick_seconds;
  out.first_tick = grid.tick(k_lo);
  out.n_ticks = k_hi - k_lo + 1;
  out.stations.reserve(keep.size());
  for (size_t s : keep) out.stations.push_back(grid.stations[s]);
  out.counts.resize(out.stations.size() * out.n_ticks);
  for (size_t i = 0; i < keep.size(); ++i) {
    const auto row = grid.station_row(keep[i]);
    std::copy(row.begin() + k_lo, row.begin() + k_hi + 1, out.counts.begin() + i * out.n_ticks);
  }
  return out;
}

} // namespace

CleanResult clean_stations(const SnapshotGrid& grid, double min_coverage) {
  CleanResult result;
  result.ticks_before = grid.n_ticks;

  SnapshotGrid current = grid;
  for (;;) {
    std::vector<size_t> keep;
    std::vector<LiveRange> ranges;
    bool dropped_any = false;
    for (size_t s = 0; s < current.stations.size(); ++s) {
      LiveRange r = live_range(current, s);
      if (r.coverage() < min_coverage) {
        result.removed.push_back({current.stations[s], r.coverage()});
        dropped_any = true;
      } else {
        keep.push_back(s);
        ranges.push_back(r);
      }
    }
    if (keep.empty()) throw Error(errc::all_stations_dropped, "coverage threshold removed every station");

    std::int64_t lo = 0;
    std::int64_t hi = static_cast<std::int64_t>(current.n_ticks) - 1;
    for (const auto& r : ranges) {
      lo = std::max(lo, r.first);
      hi = std::min(hi, r.last);
    }
    if (lo > hi) throw Error(errc::all_stations_dropped, "no interval where all stations report");

    bool trimmed = lo > 0 || hi < static_cast<std::int64_t>(current.n_ticks) - 1;
    if (!dropped_any && !trimmed) break;
    current = subgrid(current, keep, static_cast<size_t>(lo), static_cast<size_t>(hi));
  }

  result.ticks_after = current.n_ticks;
  result.shared_ticks = 0;
  for (size_t k = 0; k < current.n_ticks; ++k) {
    bool all = true;
    for (size_t s = 0; s < current.stations.size() && all; ++s) {
      all = current.at(s, k) != SnapshotGrid::kMissing;
    }
    if (all) ++result.shared_ticks;
  }
  result.grid = std::move(current);
  return result;
}

SnapshotGrid restrict_grid(const SnapshotGrid& grid, std::span<const int> station_ids,
                           timestamp_t from, timestamp_t to) {
  std::vector<size_t> keep;
  std::vector<int> ids(station_ids.begin(), station_ids.end());
  std::sort(ids.begin(), ids.end());
  for (int id : ids) {
    int idx = grid.station_index(id);
    if (idx < 0) throw Error(errc::unknown_station, "station " + std::to_string(id) + " not in grid");
    keep.push_back(static_cast<size_t>(idx));
  }
  if (keep.empty()) throw Error(errc::empty_station_list, "no stations to keep");

  std::int64_t k_lo = 0;
  std::int64_t k_hi = static_cast<std::int64_t>(grid.n_ticks) - 1;
  while (k_lo <= k_hi && grid.tick(static_cast<size_t>(k_lo)) < from) ++k_lo;
  while (k_hi >= k_lo && grid.tick(static_cast<size_t>(k_hi)) > to) --k_hi;
  if (k_lo > k_hi) throw Error(errc::empty_input, "time window keeps no ticks");
  return subgrid(grid, keep, static_cast<size_t>(k_lo), static_cast<size_t>(k_hi));
}

void write_grid_csv(const SnapshotGrid& grid, std::ostream& out) {
  out << "timestamp";
  for (int id : grid.stations) out << ',' << id;
  out << '\n';
  for (size_t k = 0; k < grid.n_ticks; ++k) {
    out << format_iso(grid.tick(k));
    for (size_t s = 0; s < grid.stations.size(); ++s) {
      auto v = grid.at(s, k);
      out << ',';
      if (v == SnapshotGrid::kMissing) out << "NA";
      else out << v;
    }
    out << '\n';
  }
}

SnapshotGrid read_grid_csv(std::istream& in) {
  TableReader reader(in, ',');
  const auto& header = reader.header();
  if (header.size() < 2 || header[0] != "timestamp") {
    throw Error(errc::malformed_row, "grid table must start with a timestamp column");
  }
  SnapshotGrid grid;
  for (size_t i = 1; i < header.size(); ++i) {
    int id = 0;
    auto res = std::from_chars(header[i].data(), header[i].data() + header[i].size(), id);
    if (res.ec != std::errc()) throw Error(errc::malformed_row, "bad station id in grid header");
    grid.stations.push_back(id);
  }

  std::vector<std::vector<std::int32_t>> rows; // tick-major while reading
  std::vector<std::string> fields;
  std::vector<timestamp_t> ticks;
  while (reader.next(fields)) {
    if (fields.size() != header.size()) throw Error(errc::malformed_row, "ragged grid row");
    auto ts = parse_datetime(fields[0], "%Y-%m-%d %H:%M:%S");
    if (!ts) throw Error(errc::malformed_row, "bad grid timestamp");
    ticks.push_back(*ts);
    std::vector<std::int32_t> row(grid.stations.size());
    for (size_t i = 1; i < fields.size(); ++i) {
      if (fields[i] == "NA") {
        row[i - 1] = SnapshotGrid::kMissing;
      } else {
        int v = 0;
        auto res = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
        if (res.ec != std::errc()) throw Error(errc::malformed_row, "bad grid count");
        row[i - 1] = v;
      }
    }
    rows.push_back(std::move(row));
  }
  if (ticks.empty()) throw Error(errc::empty_input, "grid table has no rows");
  grid.first_tick = ticks[0];
  grid.n_ticks = ticks.size();
  grid.tick_seconds = ticks.size() > 1 ? ticks[1] - ticks[0] : 900;
  for (size_t k = 0; k < ticks.size(); ++k) {
    if (ticks[k] != grid.tick(k)) throw Error(errc::malformed_row, "grid ticks not uniform");
  }
  grid.counts.resize(grid.stations.size() * grid.n_ticks);
  for (size_t k = 0; k < rows.size(); ++k) {
    for (size_t s = 0; s < grid.stations.size(); ++s) grid.at(s, k) = rows[k][s];
  }
  return grid;
}

} // namespace bikecast
