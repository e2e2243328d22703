#include "bikecast/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "bikecast/csv.hpp"

namespace bikecast {

int TripAdjacency::station_index(int station_id) const {
  auto it = std::lower_bound(stations.begin(), stations.end(), station_id);
  if (it == stations.end() || *it != station_id) return -1;
  return static_cast<int>(it - stations.begin());
}

std::int64_t TripAdjacency::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

TripAdjacency build_adjacency(std::span<const TripRecord> trips, std::span<const int> station_ids) {
  if (station_ids.empty()) throw Error(errc::empty_station_list, "adjacency needs stations");

  TripAdjacency adj;
  adj.stations.assign(station_ids.begin(), station_ids.end());
  std::sort(adj.stations.begin(), adj.stations.end());
  adj.stations.erase(std::unique(adj.stations.begin(), adj.stations.end()), adj.stations.end());
  adj.counts.assign(adj.size() * adj.size(), 0);

  for (const auto& trip : trips) {
    int from = adj.station_index(trip.start_station);
    int to = adj.station_index(trip.end_station);
    if (from < 0 || to < 0) {
      ++adj.skipped_trips;
      continue;
    }
    ++adj.at(static_cast<size_t>(from), static_cast<size_t>(to));
  }
  return adj;
}

NeighborSet top_k_neighbors(const TripAdjacency& adjacency, int station_id, int k) {
  int target = adjacency.station_index(station_id);
  if (target < 0) throw Error(errc::unknown_station, "station " + std::to_string(station_id));

  struct Source {
    std::int64_t trips;
    int station_id;
  };
  std::vector<Source> sources;
  for (size_t j = 0; j < adjacency.size(); ++j) {
    if (static_cast<int>(j) == target) continue;
    std::int64_t c = adjacency.at(j, static_cast<size_t>(target));
    if (c > 0) sources.push_back({c, adjacency.stations[j]});
  }
  std::sort(sources.begin(), sources.end(), [](const Source& a, const Source& b) {
    if (a.trips != b.trips) return a.trips > b.trips;
    return a.station_id < b.station_id;
  });

  NeighborSet set;
  set.station_id = station_id;
  size_t take = std::min<size_t>(static_cast<size_t>(k), sources.size());
  set.neighbors.reserve(take);
  for (size_t i = 0; i < take; ++i) set.neighbors.push_back(sources[i].station_id);
  return set;
}

std::vector<std::vector<int>> RegionPartition::members() const {
  std::vector<std::vector<int>> out(static_cast<size_t>(region_count));
  for (const auto& [station, region] : assignment) {
    out[static_cast<size_t>(region - 1)].push_back(station);
  }
  return out;
}

RegionPartition partition_regions(const TripAdjacency& adjacency, std::int64_t min_edge_weight) {
  const size_t n = adjacency.size();

  // Union-find over stations connected by strong symmetrized edges.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (size_t j = 0; j < n; ++j) {
    for (size_t i = j + 1; i < n; ++i) {
      std::int64_t weight = adjacency.at(j, i) + adjacency.at(i, j);
      if (weight >= min_edge_weight) {
        int a = find(static_cast<int>(j));
        int b = find(static_cast<int>(i));
        if (a != b) parent[a] = b;
      }
    }
  }

  // Components ordered by smallest member id; station lists are sorted,
  // so the first sighting of each root is its smallest member.
  RegionPartition part;
  std::map<int, int> root_to_region;
  for (size_t s = 0; s < n; ++s) {
    int root = find(static_cast<int>(s));
    auto [it, inserted] = root_to_region.try_emplace(root, 0);
    if (inserted) it->second = ++part.region_count;
    part.assignment[adjacency.stations[s]] = it->second;
  }

  std::int64_t total = adjacency.total();
  if (total > 0) {
    std::int64_t intra = 0;
    for (size_t j = 0; j < n; ++j) {
      int rj = part.assignment.at(adjacency.stations[j]);
      for (size_t i = 0; i < n; ++i) {
        if (part.assignment.at(adjacency.stations[i]) == rj) intra += adjacency.at(j, i);
      }
    }
    part.intra_fraction = static_cast<double>(intra) / static_cast<double>(total);
  }
  return part;
}

void write_adjacency_csv(const TripAdjacency& adjacency, std::ostream& out) {
  out << "station";
  for (int id : adjacency.stations) out << ',' << id;
  out << '\n';
  for (size_t j = 0; j < adjacency.size(); ++j) {
    out << adjacency.stations[j];
    for (size_t i = 0; i < adjacency.size(); ++i) out << ',' << adjacency.at(j, i);
    out << '\n';
  }
}

namespace {

int parse_int_field(const std::string& s, const char* what) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(errc::malformed_row, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

} // namespace

TripAdjacency read_adjacency_csv(std::istream& in) {
  TableReader reader(in, ',');
  const auto& header = reader.header();
  if (header.size() < 2 || header[0] != "station") {
    throw Error(errc::malformed_row, "adjacency table must start with a station column");
  }
  TripAdjacency adj;
  for (size_t i = 1; i < header.size(); ++i) {
    adj.stations.push_back(parse_int_field(header[i], "station id"));
  }
  const size_t n = adj.stations.size();
  adj.counts.assign(n * n, 0);
  std::vector<std::string> fields;
  size_t row = 0;
  while (reader.next(fields)) {
    if (fields.size() != n + 1 || row >= n) throw Error(errc::malformed_row, "ragged adjacency");
    for (size_t i = 0; i < n; ++i) {
      adj.at(row, i) = parse_int_field(fields[i + 1], "trip count");
    }
    ++row;
  }
  if (row != n) throw Error(errc::malformed_row, "adjacency row count mismatch");
  return adj;
}

void write_partition_csv(const RegionPartition& partition, std::ostream& out) {
  out << "station_id,region\n";
  for (const auto& [station, region] : partition.assignment) {
    out << station << ',' << region << '\n';
  }
}

RegionPartition read_partition_csv(std::istream& in) {
  TableReader reader(in, ',');
  RegionPartition part;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != 2) throw Error(errc::malformed_row, "partition rows are station,region");
    int station = parse_int_field(fields[0], "station id");
    int region = parse_int_field(fields[1], "region");
    part.assignment[station] = region;
    part.region_count = std::max(part.region_count, region);
  }
  return part;
}

void write_neighbors_csv(std::span<const NeighborSet> sets, std::ostream& out) {
  out << "station_id,rank,neighbor_id\n";
  for (const auto& set : sets) {
    for (size_t r = 0; r < set.neighbors.size(); ++r) {
      out << set.station_id << ',' << (r + 1) << ',' << set.neighbors[r] << '\n';
    }
  }
}

std::vector<NeighborSet> read_neighbors_csv(std::istream& in) {
  TableReader reader(in, ',');
  std::vector<NeighborSet> sets;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != 3) throw Error(errc::malformed_row, "neighbor rows are station,rank,id");
    int station = parse_int_field(fields[0], "station id");
    int neighbor = parse_int_field(fields[2], "neighbor id");
    if (sets.empty() || sets.back().station_id != station) {
      sets.push_back({station, {}});
    }
    sets.back().neighbors.push_back(neighbor);
  }
  return sets;
}

} // namespace bikecast
