#ifndef BIKECAST_GRAPH_HPP
#define BIKECAST_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "bikecast/records.hpp"

namespace bikecast {

// Directed trip-count matrix: entry (j, i) = trips starting at station j
// and ending at station i. Round trips sit on the diagonal; they are
// stored but never feed neighbor ranking or region edges.
struct TripAdjacency {
  std::vector<int> stations; // sorted
  std::vector<std::int64_t> counts; // N x N, row-major: counts[j * N + i]
  std::int64_t skipped_trips = 0; // endpoints outside the station list

  size_t size() const { return stations.size(); }
  std::int64_t at(size_t from, size_t to) const { return counts[from * size() + to]; }
  std::int64_t& at(size_t from, size_t to) { return counts[from * size() + to]; }
  int station_index(int station_id) const;
  std::int64_t total() const;
};

struct NeighborSet {
  int station_id = 0;
  std::vector<int> neighbors; // descending trip count, ties by ascending id
};

struct RegionPartition {
  std::map<int, int> assignment; // station id -> region index (1-based, contiguous)
  int region_count = 0;
  double intra_fraction = 0.0; // trips with both endpoints in one region

  std::vector<std::vector<int>> members() const; // per region, ascending ids
};

TripAdjacency build_adjacency(std::span<const TripRecord> trips, std::span<const int> station_ids);

NeighborSet top_k_neighbors(const TripAdjacency& adjacency, int station_id, int k = 10);

// Regions are connected components of the symmetrized adjacency after
// zeroing off-diagonal entries below min_edge_weight. Components are
// numbered by their smallest member id; intra_fraction is measured
// against the original directed counts (diagonal included).
RegionPartition partition_regions(const TripAdjacency& adjacency, std::int64_t min_edge_weight);

void write_adjacency_csv(const TripAdjacency& adjacency, std::ostream& out);
TripAdjacency read_adjacency_csv(std::istream& in);
void write_partition_csv(const RegionPartition& partition, std::ostream& out);
RegionPartition read_partition_csv(std::istream& in);
void write_neighbors_csv(std::span<const NeighborSet> sets, std::ostream& out);
std::vector<NeighborSet> read_neighbors_csv(std::istream& in);

} // namespace bikecast

#endif
