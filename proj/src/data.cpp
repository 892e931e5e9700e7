#include "fairpark/data.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "fairpark/kmeans.hpp"
#include "fairpark/rng.hpp"

namespace fairpark {

namespace {

constexpr double kSecondsPerDay = 86400.0;

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

// Splits one CSV line; double quotes group delimiters but are not unescaped
// beyond stripping the outer pair.
std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      cur.push_back(c);
    } else if (c == delim && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_lon_lat(const std::string& text, GeoPoint& out) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return false;
  return parse_double(trim(text.substr(0, comma)), out.lon) &&
         parse_double(trim(text.substr(comma + 1)), out.lat);
}

double second_of_day(double t) {
  double s = std::fmod(t, kSecondsPerDay);
  if (s < 0) s += kSecondsPerDay;
  return s;
}

}  // namespace

bool parse_timestamp(const std::string& raw, double& seconds) {
  const std::string text = trim(raw);
  int y, mo, d, h, mi, s;
  char sep;
  char tail;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%c", &y, &mo, &d, &sep, &h, &mi, &s, &tail) == 7 &&
      (sep == ' ' || sep == 'T')) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) return false;
    const auto days = sys_days{ymd}.time_since_epoch().count();
    seconds = static_cast<double>(days) * kSecondsPerDay + h * 3600.0 + mi * 60.0 + s;
    return true;
  }
  return parse_double(text, seconds);
}

std::string format_timestamp(double seconds) {
  if (seconds != std::floor(seconds)) return shortest(seconds);
  using namespace std::chrono;
  const auto whole = static_cast<long long>(seconds);
  long long days = whole / 86400;
  long long rem = whole % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02lld:%02lld:%02lld", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), rem / 3600,
                (rem % 3600) / 60, rem % 60);
  return buf;
}

ParseResult parse_trip_csv_text(const std::string& text, const CsvSchema& schema) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("trip csv: missing header");
  const std::vector<std::string> header = split_line(line, schema.delimiter);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("trip csv: missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_pt = column(schema.pickup_time);
  const std::size_t c_dt = column(schema.dropoff_time);
  const std::size_t c_plon = column(schema.pickup_lon);
  const std::size_t c_plat = column(schema.pickup_lat);
  const std::size_t c_dlon = column(schema.dropoff_lon);
  const std::size_t c_dlat = column(schema.dropoff_lat);
  const std::size_t needed = std::max({c_pt, c_dt, c_plon, c_plat, c_dlon, c_dlat}) + 1;

  ParseResult result;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split_line(line, schema.delimiter);
    RawTrip trip;
    const bool ok = f.size() >= needed && parse_timestamp(f[c_pt], trip.pickup_time) &&
                    parse_timestamp(f[c_dt], trip.dropoff_time) && parse_double(f[c_plon], trip.pickup.lon) &&
                    parse_double(f[c_plat], trip.pickup.lat) && parse_double(f[c_dlon], trip.dropoff.lon) &&
                    parse_double(f[c_dlat], trip.dropoff.lat) && trip.dropoff_time >= trip.pickup_time &&
                    schema.region.contains(trip.pickup) && schema.region.contains(trip.dropoff);
    if (ok) {
      result.trips.push_back(trip);
    } else {
      ++result.dropped;
    }
  }
  return result;
}

ParseResult parse_trip_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open trip file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trip_csv_text(buf.str(), schema);
}

std::string export_trip_csv(std::span<const RawTrip> trips, const CsvSchema& schema) {
  const char d = schema.delimiter;
  std::string out = schema.pickup_time + d + schema.dropoff_time + d + schema.pickup_lon + d +
                    schema.pickup_lat + d + schema.dropoff_lon + d + schema.dropoff_lat + "\n";
  for (const RawTrip& t : trips) {
    out += format_timestamp(t.pickup_time) + d + format_timestamp(t.dropoff_time) + d + shortest(t.pickup.lon) +
           d + shortest(t.pickup.lat) + d + shortest(t.dropoff.lon) + d + shortest(t.dropoff.lat) + "\n";
  }
  return out;
}

ParseResult parse_sumo_trips_text(const std::string& xml, const SumoOptions& options) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(xml);
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw DataError(std::string("sumo trips: malformed XML: ") + e.what());
  }
  ParseResult result;
  std::function<void(const pt::ptree&)> walk = [&](const pt::ptree& node) {
    for (const auto& [name, child] : node) {
      if (name == "<xmlattr>") continue;
      if (name != "trip") {
        walk(child);
        continue;
      }
      const auto attr = [&](const char* key) { return child.get<std::string>(std::string("<xmlattr>.") + key, ""); };
      RawTrip trip;
      double depart = 0.0;
      bool ok = parse_double(attr("depart"), depart) && parse_lon_lat(attr("fromLonLat"), trip.pickup) &&
                parse_lon_lat(attr("toLonLat"), trip.dropoff);
      trip.pickup_time = options.time_origin + depart;
      const std::string arrival = attr("arrival");
      double arr = 0.0;
      if (arrival.empty()) {
        trip.dropoff_time = trip.pickup_time + options.default_duration_s;
      } else if (parse_double(arrival, arr)) {
        trip.dropoff_time = options.time_origin + arr;
      } else {
        ok = false;
      }
      ok = ok && trip.dropoff_time >= trip.pickup_time && options.region.contains(trip.pickup) &&
           options.region.contains(trip.dropoff);
      if (ok) {
        result.trips.push_back(trip);
      } else {
        ++result.dropped;
      }
    }
  };
  walk(tree);
  return result;
}

ParseResult parse_sumo_trips(const std::filesystem::path& path, const SumoOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open SUMO trip file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sumo_trips_text(buf.str(), options);
}

Point project(GeoPoint p, const BoundingBox& region) {
  const GeoPoint c = region.center();
  const double coslat = std::cos(c.lat * M_PI / 180.0);
  return {(p.lon - c.lon) * coslat * kMilesPerDegree, (p.lat - c.lat) * kMilesPerDegree};
}

std::vector<PlanarTrip> project_to_plane(std::span<const RawTrip> trips, const BoundingBox& region) {
  std::vector<PlanarTrip> out;
  out.reserve(trips.size());
  for (const RawTrip& t : trips) {
    out.push_back({project(t.pickup, region), project(t.dropoff, region), t.pickup_time, t.dropoff_time});
  }
  return out;
}

std::vector<LotCapacity> gen_capacities(int n_drivers, int n_lots, std::uint64_t seed) {
  if (n_lots < 1) throw std::invalid_argument("gen_capacities: need at least one lot");
  if (n_drivers < 0) throw std::invalid_argument("gen_capacities: negative driver count");
  Rng rng(seed);
  const int base = n_drivers / n_lots;
  std::vector<LotCapacity> out(n_lots);
  for (LotCapacity& lot : out) {
    lot.capacity = static_cast<int>(rng.uniform_int(base + 1, base + 2));
    lot.initial_occupancy = static_cast<int>(rng.uniform_int((lot.capacity + 2) / 4, (3 * lot.capacity + 2) / 4));
  }
  return out;
}

const char* to_string(TimeMapping mapping) {
  return mapping == TimeMapping::time_of_day ? "time-of-day" : "stretch";
}

TimeMapping time_mapping_from_string(const std::string& name) {
  if (name == "time-of-day") return TimeMapping::time_of_day;
  if (name == "stretch") return TimeMapping::stretch;
  throw std::invalid_argument("unknown time mapping '" + name + "'");
}

int period_of(double second_of_day, int horizon) {
  const double length = kSecondsPerDay / horizon;
  const int p = static_cast<int>(std::floor(second_of_day / length)) + 1;
  return std::clamp(p, 1, horizon);
}

Instance sample_trial(std::span<const RawTrip> pool, const TrialConfig& config) {
  if (config.n_drivers < 1 || config.n_lots < 1) throw DataError("trial needs at least one driver and lot");
  if (pool.size() < static_cast<std::size_t>(config.n_drivers))
    throw DataError("insufficient trips: need " + std::to_string(config.n_drivers) + ", have " +
                    std::to_string(pool.size()));
  if (!config.region.valid()) throw DataError("invalid region");

  Rng rng(derive_seed(config.seed, 0));
  const auto picked = rng.sample_without_replacement(pool.size(), static_cast<std::size_t>(config.n_drivers));
  std::vector<RawTrip> sampled;
  sampled.reserve(picked.size());
  for (std::size_t i : picked) sampled.push_back(pool[i]);
  const std::vector<PlanarTrip> planar = project_to_plane(sampled, config.region);

  double w0 = 0.0;
  double w1 = 0.0;
  if (config.time_mapping == TimeMapping::stretch) {
    const auto [lo, hi] = std::minmax_element(pool.begin(), pool.end(), [](const RawTrip& a, const RawTrip& b) {
      return a.pickup_time < b.pickup_time;
    });
    w0 = lo->pickup_time;
    w1 = hi->pickup_time;
  }

  std::vector<Trip> trips;
  std::vector<Point> destinations;
  for (std::size_t r = 0; r < planar.size(); ++r) {
    const PlanarTrip& p = planar[r];
    double start_sod;
    double end_sod;
    if (config.time_mapping == TimeMapping::time_of_day) {
      start_sod = second_of_day(p.start_time);
      end_sod = second_of_day(p.end_time);
    } else {
      const double span = w1 - w0;
      start_sod = span > 0 ? (p.start_time - w0) / span * kSecondsPerDay : 0.0;
      start_sod = std::min(start_sod, std::nextafter(kSecondsPerDay, 0.0));
      end_sod = second_of_day(start_sod + (p.end_time - p.start_time));
    }
    trips.push_back({static_cast<int>(r), p.origin, p.destination, period_of(start_sod, config.horizon),
                     period_of(end_sod, config.horizon)});
    destinations.push_back(p.destination);
  }

  KMeansResult clusters;
  try {
    clusters = kmeans(destinations, config.n_lots, derive_seed(config.seed, 1));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("lot placement failed: ") + e.what());
  }
  const auto caps = gen_capacities(config.n_drivers, config.n_lots, derive_seed(config.seed, 2));
  std::vector<Lot> lots;
  for (int l = 0; l < config.n_lots; ++l) {
    lots.push_back({l, clusters.centroids[l], caps[l].capacity, caps[l].initial_occupancy});
  }
  return make_instance(std::move(trips), std::move(lots), config.horizon, config.walking_speed);
}

std::vector<RawTrip> generate_synthetic_trips(const SyntheticConfig& config, std::uint64_t seed) {
  if (!config.region.valid()) throw DataError("synthetic: invalid region");
  if (config.hotspots < 1) throw DataError("synthetic: need at least one hotspot");
  if (!(config.min_duration_s >= 0.0) || config.max_duration_s < config.min_duration_s ||
      config.max_duration_s >= kSecondsPerDay)
    throw DataError("synthetic: bad trip duration range");
  Rng rng(seed);
  const BoundingBox& box = config.region;
  const double mlon = 0.1 * (box.max_lon - box.min_lon);
  const double mlat = 0.1 * (box.max_lat - box.min_lat);
  std::vector<GeoPoint> hubs;
  for (int h = 0; h < config.hotspots; ++h) {
    hubs.push_back({rng.uniform(box.min_lon + mlon, box.max_lon - mlon), rng.uniform(box.min_lat + mlat, box.max_lat - mlat)});
  }
  auto near_hub = [&]() {
    const GeoPoint& hub = hubs[rng.uniform_int(0, config.hotspots - 1)];
    GeoPoint p{rng.normal(hub.lon, config.hotspot_sd_deg), rng.normal(hub.lat, config.hotspot_sd_deg)};
    p.lon = std::round(std::clamp(p.lon, box.min_lon, box.max_lon) * 1e6) / 1e6;
    p.lat = std::round(std::clamp(p.lat, box.min_lat, box.max_lat) * 1e6) / 1e6;
    return p;
  };
  std::vector<RawTrip> out;
  out.reserve(config.trips);
  for (std::size_t i = 0; i < config.trips; ++i) {
    RawTrip t;
    t.pickup = near_hub();
    t.dropoff = near_hub();
    const double duration = std::round(rng.uniform(config.min_duration_s, config.max_duration_s));
    const double start = std::floor(rng.uniform(0.0, kSecondsPerDay - duration - 1.0));
    t.pickup_time = config.day_start + start;
    t.dropoff_time = t.pickup_time + duration;
    out.push_back(t);
  }
  return out;
}

}  // namespace fairpark
