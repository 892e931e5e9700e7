#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairpark/model.hpp"

namespace fairpark {

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct BoundingBox {
  double min_lon = -180.0;
  double min_lat = -90.0;
  double max_lon = 180.0;
  double max_lat = 90.0;

  bool valid() const { return min_lon < max_lon && min_lat < max_lat; }
  bool contains(GeoPoint p) const {
    return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
  }
  GeoPoint center() const { return {(min_lon + max_lon) / 2.0, (min_lat + max_lat) / 2.0}; }
};

// Manhattan and surroundings; Cologne metropolitan area.
inline constexpr BoundingBox kNewYorkBox{-74.05, 40.60, -73.75, 40.90};
inline constexpr BoundingBox kCologneBox{6.75, 50.80, 7.20, 51.10};

// Times are seconds since 1970-01-01 UTC.
struct RawTrip {
  double pickup_time = 0.0;
  double dropoff_time = 0.0;
  GeoPoint pickup;
  GeoPoint dropoff;
  friend bool operator==(const RawTrip&, const RawTrip&) = default;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Column names default to the 2013 NYC taxi trip files.
struct CsvSchema {
  std::string pickup_time = "pickup_datetime";
  std::string dropoff_time = "dropoff_datetime";
  std::string pickup_lon = "pickup_longitude";
  std::string pickup_lat = "pickup_latitude";
  std::string dropoff_lon = "dropoff_longitude";
  std::string dropoff_lat = "dropoff_latitude";
  char delimiter = ',';
  BoundingBox region = kNewYorkBox;
};

struct SumoOptions {
  double default_duration_s = 1200.0;  // used when a trip has no arrival time
  double time_origin = 0.0;            // epoch seconds added to SUMO sim times
  BoundingBox region = kCologneBox;
};

struct ParseResult {
  std::vector<RawTrip> trips;
  std::size_t dropped = 0;
};

// Rows with bad timestamps or coordinates, out-of-box points, or a dropoff
// before the pickup are dropped and counted. Throws DataError for a missing
// file or missing configured columns.
ParseResult parse_trip_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
ParseResult parse_trip_csv_text(const std::string& text, const CsvSchema& schema = {});
std::string export_trip_csv(std::span<const RawTrip> trips, const CsvSchema& schema = {});

// <trip depart="..." [arrival="..."] fromLonLat="lon,lat" toLonLat="lon,lat"/>
// elements anywhere under the root. Throws DataError on malformed XML.
ParseResult parse_sumo_trips(const std::filesystem::path& path, const SumoOptions& options = {});
ParseResult parse_sumo_trips_text(const std::string& xml, const SumoOptions& options = {});

// "YYYY-MM-DD HH:MM:SS" (or 'T' separator), or plain seconds.
bool parse_timestamp(const std::string& text, double& seconds);
std::string format_timestamp(double seconds);

inline constexpr double kMilesPerDegree = 69.17;

// Equirectangular projection about the region center, in miles.
Point project(GeoPoint p, const BoundingBox& region);

struct PlanarTrip {
  Point origin;
  Point destination;
  double start_time = 0.0;
  double end_time = 0.0;
};

std::vector<PlanarTrip> project_to_plane(std::span<const RawTrip> trips, const BoundingBox& region);

struct LotCapacity {
  int capacity = 0;
  int initial_occupancy = 0;
};

// capacity ~ U{floor(R/L)+1, floor(R/L)+2}; occupancy ~ U{round(cap/4), round(3cap/4)}
// with halves rounded up.
std::vector<LotCapacity> gen_capacities(int n_drivers, int n_lots, std::uint64_t seed);

// How source timestamps become periods of the day.
enum class TimeMapping {
  time_of_day,  // period from the clock time of each timestamp
  stretch,      // source window stretched linearly onto the day
};

struct TrialConfig {
  int n_drivers = 100;
  int n_lots = 10;
  int horizon = 24;
  std::uint64_t seed = 0;
  BoundingBox region = kNewYorkBox;
  double walking_speed = 3.10686;  // 5 km/h in miles per hour
  TimeMapping time_mapping = TimeMapping::time_of_day;
};

const char* to_string(TimeMapping mapping);
TimeMapping time_mapping_from_string(const std::string& name);

// Period (1..horizon) of a second-of-day value.
int period_of(double second_of_day, int horizon);

// Draws n_drivers trips without replacement, maps their times to periods,
// places lots by k-means on the sampled destinations, and draws capacities.
// Under `stretch`, the pickup window of the whole pool is mapped linearly
// onto 24 h; each dropoff keeps its original trip duration after the mapped
// pickup and wraps past midnight.
Instance sample_trial(std::span<const RawTrip> pool, const TrialConfig& config);

struct SyntheticConfig {
  std::size_t trips = 5000;
  int hotspots = 8;
  double hotspot_sd_deg = 0.006;
  double min_duration_s = 300.0;
  double max_duration_s = 2400.0;
  double day_start = 1356998400.0;  // 2013-01-01 00:00:00 UTC
  BoundingBox region{-74.02, 40.70, -73.94, 40.80};
};

// Trip pool with clustered origins and destinations and same-day dropoffs.
std::vector<RawTrip> generate_synthetic_trips(const SyntheticConfig& config, std::uint64_t seed);

}  // namespace fairpark
