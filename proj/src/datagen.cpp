#include "bikecast/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <queue>
#include <vector>

#include "bikecast/error.hpp"
#include "bikecast/rng.hpp"
#include "bikecast/timeutil.hpp"

namespace bikecast {

namespace {

struct CityInfo {
  const char* name;
  const char* zip;
  double share;      // of intra-city demand
  double lat, lon;   // center
  double fog_prob;
  double temp_base;  // mean daily F
};

const CityInfo kCities[] = {
    {"San Jose", "95113", 0.20, 37.333, -121.890, 0.05, 62.0},
    {"Redwood City", "94063", 0.08, 37.486, -122.230, 0.08, 60.0},
    {"Mountain View", "94041", 0.09, 37.389, -122.082, 0.06, 61.0},
    {"Palo Alto", "94301", 0.08, 37.444, -122.161, 0.06, 61.5},
    {"San Francisco", "94107", 0.55, 37.780, -122.398, 0.18, 58.0},
};

const char* kSanJoseNames[] = {
    "San Jose Diridon Caltrain Station", "San Jose Civic Center", "Santa Clara at Almaden",
    "Adobe on Almaden", "San Pedro Square", "Paseo de San Antonio", "San Salvador at 1st",
    "Japantown", "San Jose City Hall", "MLK Library", "SJSU 4th at San Carlos",
    "St James Park", "Arena Green / SAP Center", "SJSU - San Salvador at 9th",
    "Santa Clara County Civic Center", "Ryland Park"};
const char* kRedwoodNames[] = {
    "Redwood City Caltrain Station", "Seaport at Chesapeake", "Broadway St at Main St",
    "Franklin at Maple", "Redwood City Medical Center", "San Mateo County Center",
    "Middlefield Light Rail Station"};
const char* kMountainViewNames[] = {
    "Mountain View Caltrain Station", "Mountain View City Hall", "Castro St and El Camino Real",
    "Evelyn Park and Ride", "San Antonio Shopping Center", "San Antonio Caltrain Station",
    "Rengstorff Avenue / California Street"};
const char* kPaloAltoNames[] = {
    "Palo Alto Caltrain Station", "University and Emerson", "California Ave Caltrain Station",
    "Cowper at University", "Park at Olive"};
const char* kSanFranciscoNames[] = {
    "Harry Bridges Plaza (Ferry Building)", "San Francisco Caltrain (Townsend at 4th)",
    "San Francisco Caltrain 2 (330 Townsend)", "Market at 10th", "Market at 4th",
    "Market at Sansome", "Temporary Transbay Terminal (Howard at Beale)", "2nd at Folsom",
    "2nd at South Park", "2nd at Townsend", "5th at Howard", "Beale at Market",
    "Broadway St at Battery St", "Civic Center BART (7th at Market)", "Clay at Battery",
    "Commercial at Montgomery", "Davis at Jackson", "Embarcadero at Bryant",
    "Embarcadero at Folsom", "Embarcadero at Sansome", "Embarcadero at Vallejo",
    "Golden Gate at Polk", "Grant Avenue at Columbus Avenue", "Howard at 2nd",
    "Mechanics Plaza (Market at Battery)", "Mezes Park", "Post at Kearny",
    "Powell Street BART", "Powell at Post (Union Square)", "South Van Ness at Market",
    "Spear at Folsom", "Steuart at Market", "Townsend at 7th", "Washington at Kearny",
    "Yerba Buena Center of the Arts (3rd @ Howard)"};

struct SimStation {
  int id = 0;
  std::string name;
  int city = 0; // index into kCities
  double lat = 0.0, lon = 0.0;
  int dock = 15;
  std::int64_t install_day = 0;       // civil day
  timestamp_t live_from = 0, live_to = 0;
  double activity = 1.0;
  bool flaky = false;
  // runtime
  int count = 0;
  std::vector<std::pair<timestamp_t, timestamp_t>> outages;
};

struct StatusRow {
  timestamp_t minute;
  std::int16_t bikes;
  std::int16_t docks;
};

struct TripOut {
  timestamp_t start;
  std::int64_t duration;
  int origin; // station indices
  int dest;
  int bike_id;
  bool subscriber;
};

struct Event {
  timestamp_t ts;
  int kind; // 0 arrival (drained separately), 1 departure, 2 heartbeat, 3 rebalance
  int station; // departure: origin; others: station
  int dest = -1;
  std::int64_t duration = 0;
  int seq = 0;
};

struct DailyWeather {
  double temp, visibility, humidity, wind, precip;
  bool rain, fog;
  double demand_mult;
};

double tod_profile(int hour, bool weekend) {
  static const double weekday[24] = {0.15, 0.10, 0.08, 0.08, 0.12, 0.25, 0.70, 1.80,
                                     2.60, 1.70, 0.95, 0.95, 1.05, 0.95, 0.95, 1.10,
                                     1.90, 2.70, 1.90, 1.05, 0.65, 0.45, 0.35, 0.22};
  static const double weekend_p[24] = {0.20, 0.12, 0.08, 0.06, 0.06, 0.10, 0.20, 0.35,
                                       0.60, 0.85, 1.05, 1.20, 1.25, 1.25, 1.20, 1.10,
                                       1.00, 0.90, 0.75, 0.60, 0.50, 0.40, 0.35, 0.28};
  // Profiles are normalized so the weekly mean multiplier is ~1.
  static const double wk_mean = [] {
    double s = 0;
    for (double v : weekday) s += v;
    return s / 24.0;
  }();
  static const double we_mean = [] {
    double s = 0;
    for (double v : weekend_p) s += v;
    return s / 24.0;
  }();
  return weekend ? 0.62 * weekend_p[hour] / we_mean : weekday[hour] / wk_mean;
}

} // namespace

DatagenSummary generate_dataset(const DatagenOptions& options) {
  namespace fs = std::filesystem;
  fs::create_directories(options.out_dir);
  Rng rng(options.seed);

  const std::int64_t day0 = days_from_civil(2013, 8, 29);
  const timestamp_t sim_start = day0 * 86400;
  const timestamp_t sim_end = (day0 + options.days) * 86400 - 60;

  // ---- station table -------------------------------------------------
  std::vector<SimStation> stations;
  auto add_city = [&](int city, int first_id, const char* const* names, int n) {
    for (int i = 0; i < n; ++i) {
      SimStation s;
      s.id = first_id + i;
      s.name = names[i];
      s.city = city;
      s.lat = kCities[city].lat + (rng.next_double() - 0.5) * 0.035;
      s.lon = kCities[city].lon + (rng.next_double() - 0.5) * 0.035;
      s.dock = 11 + static_cast<int>(rng.next_below(5)) * 4; // 11..27
      s.install_day = day0 - 5 - static_cast<std::int64_t>(rng.next_below(18));
      s.activity = std::exp(0.45 * rng.next_normal());
      stations.push_back(std::move(s));
    }
  };
  add_city(0, 2, kSanJoseNames, 16);      // ids 2..17
  add_city(1, 21, kRedwoodNames, 7);      // ids 21..27
  add_city(2, 28, kMountainViewNames, 7); // ids 28..34
  add_city(3, 35, kPaloAltoNames, 5);     // ids 35..39
  add_city(4, 41, kSanFranciscoNames, 35); // ids 41..75

  auto by_id = [&](int id) -> SimStation& {
    for (auto& s : stations) {
      if (s.id == id) return s;
    }
    throw Error(errc::unknown_station, "datagen station " + std::to_string(id));
  };

  // Late installs (the last one pins the start of the shared window)
  // and one early termination, as in the published network's churn.
  const struct { int id; int y, m, d; } late[] = {
      {34, 2013, 12, 15}, {23, 2014, 1, 5},  {73, 2014, 1, 15}, {39, 2014, 2, 1},
      {74, 2014, 2, 20},  {75, 2014, 3, 12}, {69, 2014, 4, 1},  {17, 2014, 4, 9},
  };
  for (const auto& l : late) by_id(l.id).install_day = days_from_civil(l.y, l.m, l.d);

  for (auto& s : stations) {
    s.live_from = std::max(sim_start, s.install_day * 86400);
    s.live_to = sim_end;
    s.count = s.dock / 2;
  }
  by_id(70).live_to = days_from_civil(2015, 8, 10) * 86400 + 7200; // terminated early

  { // unreliable feed: kept in the files, rejected by cleaning
    SimStation s;
    s.id = 99;
    s.name = "Depot Annex";
    s.city = 0;
    s.lat = kCities[0].lat + 0.011;
    s.lon = kCities[0].lon - 0.007;
    s.dock = 15;
    s.install_day = day0 - 10;
    s.live_from = sim_start;
    s.live_to = sim_end;
    s.activity = 0.8;
    s.flaky = true;
    s.count = 7;
    stations.push_back(std::move(s));
  }
  const size_t n_stations = stations.size();

  // Feed outages: a couple per station-year, 1.5..6 h.
  for (auto& s : stations) {
    int n_out = s.flaky ? 0 : static_cast<int>(rng.next_below(5)) + 2;
    for (int i = 0; i < n_out; ++i) {
      timestamp_t span = s.live_to - s.live_from;
      if (span <= 0) continue;
      timestamp_t start = s.live_from + static_cast<timestamp_t>(rng.next_below(
                                            static_cast<std::uint64_t>(span)));
      timestamp_t dur = 5400 + static_cast<timestamp_t>(rng.next_below(16200));
      s.outages.emplace_back(start, start + dur);
    }
    std::sort(s.outages.begin(), s.outages.end());
  }
  std::vector<std::vector<unsigned char>> flaky_off(n_stations);
  for (size_t i = 0; i < n_stations; ++i) {
    if (!stations[i].flaky) continue;
    flaky_off[i].resize(static_cast<size_t>(options.days));
    for (auto& day : flaky_off[i]) day = rng.next_double() < 0.45;
  }

  // ---- demand structure ----------------------------------------------
  // Pair weights: within a city, activity products; across cities, a
  // flat floor sized for ~3% of demand so no cross edge rivals the
  // intra-city ones.
  std::vector<std::vector<std::pair<double, std::pair<int, int>>>> city_cdf(5);
  std::vector<double> city_total(5, 0.0);
  for (int c = 0; c < 5; ++c) {
    double acc = 0.0;
    for (size_t i = 0; i < n_stations; ++i) {
      if (stations[i].city != c) continue;
      for (size_t j = 0; j < n_stations; ++j) {
        if (stations[j].city != c) continue;
        double w = i == j ? 0.015 * stations[i].activity * stations[i].activity
                          : stations[i].activity * stations[j].activity;
        acc += w;
        city_cdf[c].push_back({acc, {static_cast<int>(i), static_cast<int>(j)}});
      }
    }
    city_total[c] = acc;
  }
  std::vector<std::pair<double, std::pair<int, int>>> cross_cdf;
  {
    double acc = 0.0;
    for (size_t i = 0; i < n_stations; ++i) {
      for (size_t j = 0; j < n_stations; ++j) {
        if (stations[i].city == stations[j].city) continue;
        acc += 1.0;
        cross_cdf.push_back({acc, {static_cast<int>(i), static_cast<int>(j)}});
      }
    }
  }
  auto sample_cdf = [&](const std::vector<std::pair<double, std::pair<int, int>>>& cdf,
                        double total) {
    double u = rng.next_double() * total;
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u,
                               [](const auto& e, double v) { return e.first < v; });
    if (it == cdf.end()) it = std::prev(cdf.end());
    return it->second;
  };

  // ---- outputs ---------------------------------------------------------
  std::vector<std::vector<StatusRow>> status(n_stations);
  std::vector<TripOut> trips;
  trips.reserve(static_cast<size_t>(options.trips_per_window * 96 * options.days * 1.05));

  auto in_outage = [&](const SimStation& s, timestamp_t ts) {
    for (const auto& [a, b] : s.outages) {
      if (ts >= a && ts < b) return true;
      if (a > ts) break;
    }
    return false;
  };
  auto emit_status = [&](size_t idx, timestamp_t ts) {
    SimStation& s = stations[idx];
    if (ts < s.live_from || ts > s.live_to) return;
    if (in_outage(s, ts)) return;
    if (s.flaky) {
      size_t day = static_cast<size_t>((ts - sim_start) / 86400);
      if (day < flaky_off[idx].size() && flaky_off[idx][day]) return;
    }
    timestamp_t minute = truncate_to_minute(ts);
    auto& rows = status[idx];
    if (!rows.empty() && rows.back().minute == minute) {
      rows.back().bikes = static_cast<std::int16_t>(s.count);
      rows.back().docks = static_cast<std::int16_t>(s.dock - s.count);
    } else {
      rows.push_back({minute, static_cast<std::int16_t>(s.count),
                      static_cast<std::int16_t>(s.dock - s.count)});
    }
  };

  using Arrival = std::pair<timestamp_t, int>;
  std::priority_queue<Arrival, std::vector<Arrival>, std::greater<>> arrivals;
  auto drain_arrivals = [&](timestamp_t up_to) {
    while (!arrivals.empty() && arrivals.top().first <= up_to) {
      auto [ts, dest] = arrivals.top();
      arrivals.pop();
      SimStation& d = stations[static_cast<size_t>(dest)];
      if (ts >= d.live_from && ts <= d.live_to && d.count < d.dock) {
        ++d.count;
        emit_status(static_cast<size_t>(dest), ts);
      }
    }
  };

  // ---- weather + two-year simulation ----------------------------------
  std::ofstream weather_out(fs::path(options.out_dir) / "weather.csv");
  weather_out << "date,max_temperature_f,mean_temperature_f,min_temperature_f,max_dew_point_f,"
                 "mean_dew_point_f,min_dew_point_f,max_humidity,mean_humidity,min_humidity,"
                 "max_sea_level_pressure_inches,mean_sea_level_pressure_inches,"
                 "min_sea_level_pressure_inches,max_visibility_miles,mean_visibility_miles,"
                 "min_visibility_miles,max_wind_Speed_mph,mean_wind_speed_mph,max_gust_speed_mph,"
                 "precipitation_inches,cloud_cover,events,wind_dir_degrees,zip_code\n";
  size_t weather_rows = 0;

  std::vector<DailyWeather> weather(5);
  std::vector<double> region_mult(5, 1.0);
  char buf[256];

  for (int day = 0; day < options.days; ++day) {
    const std::int64_t civil_day = day0 + day;
    int yy, mm, dd;
    civil_from_days(civil_day, yy, mm, dd);
    const int dow = day_of_week(civil_day * 86400);
    const bool weekend = dow >= 6;
    const int doy = static_cast<int>(civil_day - days_from_civil(yy, 1, 1));

    const double winter = 0.5 - 0.5 * std::cos(2.0 * 3.14159265358979 * (doy - 15) / 365.25);
    const bool bay_rain = rng.next_double() < (0.02 + 0.20 * winter);

    for (int z = 0; z < 5; ++z) {
      DailyWeather w;
      w.rain = bay_rain ? rng.next_double() < 0.9 : rng.next_double() < 0.012;
      w.fog = rng.next_double() < kCities[z].fog_prob;
      double season = 9.0 * std::sin(2.0 * 3.14159265358979 * (doy - 105) / 365.25);
      w.temp = kCities[z].temp_base + season + 2.5 * rng.next_normal() - (w.rain ? 3.0 : 0.0);
      w.humidity = std::clamp(55.0 + (w.rain ? 22.0 : 0.0) + (w.fog ? 10.0 : 0.0) +
                                  6.0 * rng.next_normal(),
                              20.0, 100.0);
      w.visibility = std::clamp(10.0 - (w.fog ? 4.5 : 0.0) - (w.rain ? 1.5 : 0.0) +
                                    0.6 * rng.next_normal(),
                                1.0, 10.0);
      w.wind = std::clamp(7.0 + 3.0 * rng.next_normal() + (z == 4 ? 2.0 : 0.0), 0.0, 30.0);
      w.precip = w.rain ? 0.03 + 0.5 * rng.next_double() * rng.next_double() : 0.0;
      w.demand_mult = w.rain ? 0.55 : (w.fog ? 0.9 : 1.0);
      weather[z] = w;
      region_mult[z] = std::exp(0.20 * rng.next_normal());

      std::string events = w.rain && w.fog ? "Fog-Rain" : w.rain ? "Rain" : w.fog ? "Fog" : "";
      const char* precip_txt;
      char precip_buf[16];
      if (!w.rain && rng.next_double() < 0.04) {
        precip_txt = "T"; // trace, as the published file writes it
      } else {
        std::snprintf(precip_buf, sizeof(precip_buf), "%.2f", w.precip);
        precip_txt = precip_buf;
      }
      std::snprintf(buf, sizeof(buf), "%d/%d/%d", mm, dd, yy);
      weather_out << buf << ',' << static_cast<int>(w.temp + 6) << ','
                  << static_cast<int>(w.temp) << ',' << static_cast<int>(w.temp - 6) << ','
                  << static_cast<int>(w.temp - 8) << ',' << static_cast<int>(w.temp - 12) << ','
                  << static_cast<int>(w.temp - 16) << ',' << static_cast<int>(std::min(100.0, w.humidity + 15)) << ','
                  << static_cast<int>(w.humidity) << ',' << static_cast<int>(std::max(5.0, w.humidity - 20)) << ','
                  << "30.1,30.0,29.9," << static_cast<int>(std::min(10.0, w.visibility + 1)) << ','
                  << static_cast<int>(w.visibility) << ',' << static_cast<int>(std::max(1.0, w.visibility - 2)) << ','
                  << static_cast<int>(w.wind + 8) << ',' << static_cast<int>(w.wind) << ','
                  << static_cast<int>(w.wind + 14) << ',' << precip_txt << ','
                  << static_cast<int>(rng.next_below(9)) << ',' << events << ','
                  << static_cast<int>(rng.next_below(360)) << ',' << kCities[z].zip << '\n';
      ++weather_rows;
    }

    std::vector<Event> events;
    int seq = 0;
    for (int window = 0; window < 96; ++window) {
      const timestamp_t w_start = (civil_day * 86400) + static_cast<timestamp_t>(window) * 900;
      const int hour = (window * 15) / 60;
      const double shared = tod_profile(hour, weekend);

      for (int c = 0; c < 5; ++c) {
        double lambda = options.trips_per_window * 0.97 * kCities[c].share * shared *
                        weather[static_cast<size_t>(c)].demand_mult *
                        region_mult[static_cast<size_t>(c)];
        int k = rng.next_poisson(lambda);
        for (int t = 0; t < k; ++t) {
          auto [i, j] = sample_cdf(city_cdf[c], city_total[c]);
          timestamp_t start = w_start + static_cast<timestamp_t>(rng.next_below(900));
          double mu = std::log(540.0);
          std::int64_t dur = static_cast<std::int64_t>(
              std::clamp(std::exp(mu + 0.45 * rng.next_normal()), 180.0, 3500.0));
          events.push_back({start, 1, i, j, dur, seq++});
        }
      }
      {
        double lambda = options.trips_per_window * 0.03 * shared;
        int k = rng.next_poisson(lambda);
        for (int t = 0; t < k; ++t) {
          auto [i, j] = sample_cdf(cross_cdf, static_cast<double>(cross_cdf.size()));
          timestamp_t start = w_start + static_cast<timestamp_t>(rng.next_below(900));
          std::int64_t dur = static_cast<std::int64_t>(
              std::clamp(std::exp(std::log(2700.0) + 0.35 * rng.next_normal()), 900.0, 10700.0));
          events.push_back({start, 1, i, j, dur, seq++});
        }
      }

      // One heartbeat per station per half hour, offset by id.
      for (size_t i = 0; i < n_stations; ++i) {
        int offset = stations[i].id % 30;
        int w_min = window * 15;
        for (int m = 0; m < 15; ++m) {
          if ((w_min + m) % 30 == offset % 30) {
            events.push_back({w_start + m * 60, 2, static_cast<int>(i), -1, 0, seq++});
          }
        }
      }
      if (hour == 3 || hour == 13) {
        if (window % 4 == 0) {
          for (size_t i = 0; i < n_stations; ++i) {
            events.push_back({w_start, 3, static_cast<int>(i), -1, 0, seq++});
          }
        }
      }
    }

    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
      if (a.ts != b.ts) return a.ts < b.ts;
      if (a.kind != b.kind) return a.kind < b.kind;
      return a.seq < b.seq;
    });

    for (const Event& e : events) {
      drain_arrivals(e.ts);
      SimStation& s = stations[static_cast<size_t>(e.station)];
      if (e.kind == 1) { // departure
        SimStation& d = stations[static_cast<size_t>(e.dest)];
        if (e.ts < s.live_from || e.ts > s.live_to || e.ts < d.live_from) continue;
        if (s.count <= 0) continue; // nothing to rent
        --s.count;
        emit_status(static_cast<size_t>(e.station), e.ts);
        arrivals.push({e.ts + e.duration, e.dest});
        trips.push_back({e.ts, e.duration, e.station, e.dest,
                         static_cast<int>(rng.next_below(700)) + 10,
                         rng.next_double() < 0.8});
      } else if (e.kind == 2) {
        emit_status(static_cast<size_t>(e.station), e.ts);
      } else { // rebalance toward mid-capacity when nearly empty/full
        if (e.ts < s.live_from || e.ts > s.live_to) continue;
        int target = -1;
        if (s.count <= 2) target = static_cast<int>(0.45 * s.dock + 0.5);
        else if (s.count >= s.dock - 2) target = static_cast<int>(0.55 * s.dock + 0.5);
        if (target >= 0 && target != s.count) {
          s.count = target;
          emit_status(static_cast<size_t>(e.station), e.ts);
        }
      }
    }
  }
  drain_arrivals(sim_end + 86400);

  // ---- write station/status/trip files ---------------------------------
  DatagenSummary summary;
  summary.weather_rows = weather_rows;

  {
    std::ofstream out(fs::path(options.out_dir) / "station.csv");
    out << "id,name,lat,long,dock_count,city,installation_date\n";
    std::vector<size_t> order(n_stations);
    for (size_t i = 0; i < n_stations; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return stations[a].id < stations[b].id; });
    for (size_t i : order) {
      const SimStation& s = stations[i];
      int yy, mm, dd;
      civil_from_days(s.install_day, yy, mm, dd);
      std::snprintf(buf, sizeof(buf), "%d,\"%s\",%.6f,%.6f,%d,%s,%d/%d/%d\n", s.id,
                    s.name.c_str(), s.lat, s.lon, s.dock, kCities[s.city].name, mm, dd, yy);
      out << buf;
      ++summary.station_rows;
    }
  }

  {
    std::ofstream out(fs::path(options.out_dir) / "status.csv");
    out << "station_id,bikes_available,docks_available,time\n";
    std::vector<size_t> order(n_stations);
    for (size_t i = 0; i < n_stations; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return stations[a].id < stations[b].id; });
    for (size_t i : order) {
      for (const StatusRow& row : status[i]) {
        CivilDateTime c = from_timestamp(row.minute);
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%04d/%02d/%02d %02d:%02d:%02d\n",
                      stations[i].id, row.bikes, row.docks, c.year, c.month, c.day, c.hour,
                      c.minute, c.second);
        out << buf;
        ++summary.status_rows;
      }
    }
  }

  {
    std::ofstream out(fs::path(options.out_dir) / "trip.csv");
    out << "id,duration,start_date,start_station_name,start_station_id,end_date,"
           "end_station_name,end_station_id,bike_id,subscription_type,zip_code\n";
    std::int64_t trip_id = 4000;
    for (const TripOut& t : trips) {
      const SimStation& a = stations[static_cast<size_t>(t.origin)];
      const SimStation& b = stations[static_cast<size_t>(t.dest)];
      CivilDateTime s = from_timestamp(truncate_to_minute(t.start));
      CivilDateTime e = from_timestamp(truncate_to_minute(t.start + t.duration));
      std::snprintf(buf, sizeof(buf),
                    "%lld,%lld,%d/%d/%d %d:%02d,\"%s\",%d,%d/%d/%d %d:%02d,\"%s\",%d,%d,%s,%s\n",
                    static_cast<long long>(trip_id++), static_cast<long long>(t.duration),
                    s.month, s.day, s.year, s.hour, s.minute, a.name.c_str(), a.id, e.month,
                    e.day, e.year, e.hour, e.minute, b.name.c_str(), b.id, t.bike_id,
                    t.subscriber ? "Subscriber" : "Customer", kCities[a.city].zip);
      out << buf;
      ++summary.trip_rows;
    }
  }
  return summary;
}

} // namespace bikecast
