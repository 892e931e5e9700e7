#include "fairpark/io.hpp"

#include <fstream>
#include <sstream>

namespace fairpark {

using nlohmann::json;

namespace {

json point_json(Point p) { return json::array({p.x, p.y}); }

Point point_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InstanceError(std::string(what) + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
T field(const json& obj, const char* key) {
  if (!obj.contains(key)) throw InstanceError(std::string("missing field '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InstanceError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const Instance& instance) {
  json trips = json::array();
  for (const Trip& t : instance.trips) {
    trips.push_back({{"id", t.id},
                     {"origin", point_json(t.origin)},
                     {"destination", point_json(t.destination)},
                     {"start_period", t.start_period},
                     {"end_period", t.end_period}});
  }
  json lots = json::array();
  for (const Lot& l : instance.lots) {
    lots.push_back({{"id", l.id},
                    {"location", point_json(l.location)},
                    {"capacity", l.capacity},
                    {"initial_occupancy", l.initial_occupancy}});
  }
  return {{"horizon", instance.horizon},
          {"walking_speed", instance.walking_speed},
          {"trips", trips},
          {"lots", lots},
          {"origin_lot", instance.origin_lot}};
}

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw InstanceError("instance: expected a JSON object");
  Instance inst;
  inst.horizon = field<int>(doc, "horizon");
  inst.walking_speed = field<double>(doc, "walking_speed");
  for (const json& t : field<json>(doc, "trips")) {
    Trip trip;
    trip.id = field<int>(t, "id");
    trip.origin = point_from(field<json>(t, "origin"), "origin");
    trip.destination = point_from(field<json>(t, "destination"), "destination");
    trip.start_period = field<int>(t, "start_period");
    trip.end_period = field<int>(t, "end_period");
    inst.trips.push_back(trip);
  }
  for (const json& l : field<json>(doc, "lots")) {
    Lot lot;
    lot.id = field<int>(l, "id");
    lot.location = point_from(field<json>(l, "location"), "location");
    lot.capacity = field<int>(l, "capacity");
    lot.initial_occupancy = field<int>(l, "initial_occupancy");
    inst.lots.push_back(lot);
  }
  if (doc.contains("origin_lot")) {
    inst.origin_lot = field<std::vector<int>>(doc, "origin_lot");
  } else if (!inst.lots.empty()) {
    inst.origin_lot = compute_origin_lots(inst.trips, inst.lots);
  }
  validate(inst);
  return inst;
}

json to_json(const Scenario& s) {
  json lots = json::array();
  for (const Lot& l : s.lots) {
    lots.push_back({{"id", l.id},
                    {"location", point_json(l.location)},
                    {"capacity", l.capacity},
                    {"initial_occupancy", l.initial_occupancy}});
  }
  json requests = json::array();
  for (const ParkingRequest& q : s.requests) {
    requests.push_back({{"driver", q.driver},
                        {"request_time", q.request_time},
                        {"arrival_time", q.arrival_time},
                        {"destination", point_json(q.destination)},
                        {"lambda", q.lambda},
                        {"monetary_cost", q.monetary_cost},
                        {"max_money", q.max_money},
                        {"max_distance", q.max_distance}});
  }
  return {{"horizon", s.horizon},
          {"walking_speed", s.walking_speed},
          {"lots", lots},
          {"departures", s.departures},
          {"requests", requests}};
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ScenarioError("scenario: expected a JSON object");
  Scenario s;
  try {
    s.horizon = field<int>(doc, "horizon");
    s.walking_speed = field<double>(doc, "walking_speed");
    for (const json& l : field<json>(doc, "lots")) {
      Lot lot;
      lot.id = field<int>(l, "id");
      lot.location = point_from(field<json>(l, "location"), "location");
      lot.capacity = field<int>(l, "capacity");
      lot.initial_occupancy = field<int>(l, "initial_occupancy");
      s.lots.push_back(lot);
    }
    if (doc.contains("departures")) s.departures = field<std::vector<std::vector<int>>>(doc, "departures");
    for (const json& q : field<json>(doc, "requests")) {
      ParkingRequest r;
      r.driver = field<int>(q, "driver");
      r.request_time = field<int>(q, "request_time");
      r.arrival_time = field<int>(q, "arrival_time");
      r.destination = point_from(field<json>(q, "destination"), "destination");
      r.lambda = field<double>(q, "lambda");
      r.monetary_cost = field<std::vector<double>>(q, "monetary_cost");
      r.max_money = field<double>(q, "max_money");
      r.max_distance = field<double>(q, "max_distance");
      s.requests.push_back(std::move(r));
    }
  } catch (const InstanceError& e) {
    throw ScenarioError(e.what());
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json_file(path)); }

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  write_text_file(path, to_json(scenario).dump(2) + "\n");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  write_text_file(path, to_json(instance).dump(2) + "\n");
}

}  // namespace fairpark
