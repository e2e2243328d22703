#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "bikecast/graph.hpp"
#include "bikecast/rng.hpp"

using namespace bikecast;

namespace {

TripRecord trip(int from, int to) {
  return {from, to, 0, 60, 60};
}

} // namespace

TEST_CASE("build_adjacency counts directed trips") {
  std::vector<TripRecord> trips{trip(1, 2), trip(1, 2), trip(3, 2)};
  std::vector<int> stations{1, 2, 3};
  TripAdjacency adj = build_adjacency(trips, stations);
  CHECK(adj.at(0, 1) == 2);
  CHECK(adj.at(2, 1) == 1);
  CHECK(adj.total() == 3);
  CHECK(adj.skipped_trips == 0);
}

TEST_CASE("build_adjacency keeps self loops on the diagonal and skips unknown stations") {
  std::vector<TripRecord> trips{trip(2, 2), trip(2, 9), trip(9, 1)};
  std::vector<int> stations{1, 2};
  TripAdjacency adj = build_adjacency(trips, stations);
  CHECK(adj.at(1, 1) == 1);
  CHECK(adj.skipped_trips == 2);
  // conservation: matrix total + skipped = input trips
  CHECK(adj.total() + adj.skipped_trips == static_cast<std::int64_t>(trips.size()));
}

TEST_CASE("build_adjacency requires a station list") {
  std::vector<TripRecord> trips{trip(1, 2)};
  CHECK_THROWS_AS(build_adjacency(trips, std::vector<int>{}), Error);
}

TEST_CASE("top_k_neighbors ranks inbound sources by trip count") {
  std::vector<TripRecord> trips{trip(1, 2), trip(1, 2), trip(3, 2)};
  TripAdjacency adj = build_adjacency(trips, std::vector<int>{1, 2, 3});
  NeighborSet set = top_k_neighbors(adj, 2, 10);
  CHECK(set.neighbors == std::vector<int>{1, 3});
}

TEST_CASE("top_k_neighbors breaks ties by ascending station id") {
  std::vector<TripRecord> trips;
  for (int i = 0; i < 5; ++i) trips.push_back(trip(9, 4));
  for (int i = 0; i < 5; ++i) trips.push_back(trip(2, 4));
  TripAdjacency adj = build_adjacency(trips, std::vector<int>{2, 4, 9});
  NeighborSet set = top_k_neighbors(adj, 4, 10);
  CHECK(set.neighbors == std::vector<int>{2, 9});
}

TEST_CASE("top_k_neighbors never includes the station itself") {
  Rng rng(3);
  std::vector<TripRecord> trips;
  std::vector<int> stations{1, 2, 3, 4, 5, 6, 7};
  for (int i = 0; i < 500; ++i) {
    int a = stations[rng.next_below(stations.size())];
    int b = stations[rng.next_below(stations.size())];
    trips.push_back(trip(a, b));
  }
  TripAdjacency adj = build_adjacency(trips, stations);
  for (int id : stations) {
    NeighborSet set = top_k_neighbors(adj, id, 3);
    CHECK(set.neighbors.size() <= 3);
    for (int n : set.neighbors) CHECK(n != id);
  }
  CHECK_THROWS_AS(top_k_neighbors(adj, 42, 3), Error);
}

TEST_CASE("partition splits a block-diagonal network into its blocks") {
  std::vector<TripRecord> trips;
  for (int i = 0; i < 20; ++i) {
    trips.push_back(trip(1, 2));
    trips.push_back(trip(2, 1));
    trips.push_back(trip(3, 4));
    trips.push_back(trip(4, 3));
  }
  trips.push_back(trip(1, 3)); // single weak cross edge
  TripAdjacency adj = build_adjacency(trips, std::vector<int>{1, 2, 3, 4});
  RegionPartition part = partition_regions(adj, 5);
  CHECK(part.region_count == 2);
  CHECK(part.assignment.at(1) == 1);
  CHECK(part.assignment.at(2) == 1);
  CHECK(part.assignment.at(3) == 2);
  CHECK(part.assignment.at(4) == 2);
  CHECK(part.intra_fraction == doctest::Approx(80.0 / 81.0));
}

TEST_CASE("partition of a complete graph above threshold is one region") {
  std::vector<TripRecord> trips;
  std::vector<int> stations{1, 2, 3, 4};
  for (int a : stations) {
    for (int b : stations) {
      if (a == b) continue;
      for (int i = 0; i < 10; ++i) trips.push_back(trip(a, b));
    }
  }
  TripAdjacency adj = build_adjacency(trips, stations);
  RegionPartition part = partition_regions(adj, 5);
  CHECK(part.region_count == 1);
  CHECK(part.intra_fraction == 1.0);
}

TEST_CASE("partition with an impossible threshold isolates every station") {
  std::vector<TripRecord> trips{trip(1, 2)};
  TripAdjacency adj = build_adjacency(trips, std::vector<int>{1, 2, 3});
  RegionPartition part = partition_regions(adj, 1000);
  CHECK(part.region_count == 3);
  // regions numbered by smallest member id, contiguous from 1
  CHECK(part.assignment.at(1) == 1);
  CHECK(part.assignment.at(2) == 2);
  CHECK(part.assignment.at(3) == 3);
}

TEST_CASE("round trips are excluded from region edges but count as intra trips") {
  std::vector<TripRecord> trips;
  for (int i = 0; i < 100; ++i) trips.push_back(trip(1, 1));
  trips.push_back(trip(1, 2));
  TripAdjacency adj = build_adjacency(trips, std::vector<int>{1, 2});
  RegionPartition part = partition_regions(adj, 50);
  // the diagonal's 100 trips must not glue 1 and 2 together
  CHECK(part.region_count == 2);
  CHECK(part.intra_fraction == doctest::Approx(100.0 / 101.0));
}

TEST_CASE("raising the edge threshold never decreases the region count") {
  Rng rng(17);
  std::vector<int> stations;
  for (int i = 1; i <= 12; ++i) stations.push_back(i);
  std::vector<TripRecord> trips;
  for (int i = 0; i < 2000; ++i) {
    int a = stations[rng.next_below(stations.size())];
    int b = stations[rng.next_below(stations.size())];
    trips.push_back(trip(a, b));
  }
  TripAdjacency adj = build_adjacency(trips, stations);
  int previous = 0;
  for (std::int64_t w : {1, 2, 5, 10, 20, 40, 80, 160}) {
    RegionPartition part = partition_regions(adj, w);
    CHECK(part.region_count >= previous);
    previous = part.region_count;
    // partition property: every station assigned exactly once
    CHECK(part.assignment.size() == stations.size());
    auto members = part.members();
    size_t total = 0;
    for (const auto& m : members) total += m.size();
    CHECK(total == stations.size());
  }
}

TEST_CASE("adjacency and partition tables round trip") {
  std::vector<TripRecord> trips{trip(1, 2), trip(2, 3), trip(3, 1), trip(2, 2)};
  TripAdjacency adj = build_adjacency(trips, std::vector<int>{1, 2, 3});
  std::stringstream io;
  write_adjacency_csv(adj, io);
  TripAdjacency back = read_adjacency_csv(io);
  CHECK(back.stations == adj.stations);
  CHECK(back.counts == adj.counts);

  RegionPartition part = partition_regions(adj, 1);
  std::stringstream io2;
  write_partition_csv(part, io2);
  RegionPartition part_back = read_partition_csv(io2);
  CHECK(part_back.assignment == part.assignment);
  CHECK(part_back.region_count == part.region_count);
}
