#include "fairpark/model.hpp"

#include <limits>
#include <sstream>

#include "fairpark/fairness.hpp"

namespace fairpark {

namespace {

bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

std::vector<int> compute_origin_lots(std::span<const Trip> trips, std::span<const Lot> lots) {
  if (lots.empty()) throw InstanceError("compute_origin_lots: no lots");
  std::vector<int> out;
  out.reserve(trips.size());
  for (const Trip& trip : trips) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < lots.size(); ++l) {
      const double d = l1_distance(trip.origin, lots[l].location);
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<int>(l);
      }
    }
    out.push_back(best);
  }
  return out;
}

Instance make_instance(std::vector<Trip> trips, std::vector<Lot> lots, int horizon,
                       double walking_speed) {
  Instance inst;
  inst.origin_lot = compute_origin_lots(trips, lots);
  inst.trips = std::move(trips);
  inst.lots = std::move(lots);
  inst.horizon = horizon;
  inst.walking_speed = walking_speed;
  validate(inst);
  return inst;
}

void validate(const Instance& instance) {
  auto fail = [](const std::string& msg) { throw InstanceError(msg); };
  if (instance.horizon < 1) fail("horizon must be >= 1");
  if (!(instance.walking_speed > 0.0) || !std::isfinite(instance.walking_speed))
    fail("walking_speed must be positive");
  if (instance.lots.empty() && !instance.trips.empty()) fail("trips present but no lots");
  for (std::size_t l = 0; l < instance.lots.size(); ++l) {
    const Lot& lot = instance.lots[l];
    if (!finite(lot.location)) fail("lot " + std::to_string(l) + ": non-finite location");
    if (lot.capacity < 0) fail("lot " + std::to_string(l) + ": negative capacity");
    if (lot.initial_occupancy < 0 || lot.initial_occupancy > lot.capacity)
      fail("lot " + std::to_string(l) + ": initial occupancy outside [0, capacity]");
  }
  if (instance.origin_lot.size() != instance.trips.size())
    fail("origin_lot size does not match trip count");
  for (std::size_t r = 0; r < instance.trips.size(); ++r) {
    const Trip& trip = instance.trips[r];
    const std::string who = "trip " + std::to_string(r);
    if (!finite(trip.origin) || !finite(trip.destination)) fail(who + ": non-finite coordinates");
    if (trip.start_period < 1 || trip.start_period > instance.horizon)
      fail(who + ": start_period outside 1..horizon");
    if (trip.end_period < 1 || trip.end_period > instance.horizon)
      fail(who + ": end_period outside 1..horizon");
    const int z = instance.origin_lot[r];
    if (z < 0 || static_cast<std::size_t>(z) >= instance.lots.size())
      fail(who + ": origin lot out of range");
  }
  // origin_lot must be a nearest lot; ties may be recorded either way.
  if (!instance.trips.empty()) {
    for (std::size_t r = 0; r < instance.trips.size(); ++r) {
      const Point o = instance.trips[r].origin;
      const double chosen = l1_distance(o, instance.lots[instance.origin_lot[r]].location);
      for (const Lot& lot : instance.lots) {
        if (l1_distance(o, lot.location) < chosen)
          fail("trip " + std::to_string(r) + ": origin_lot is not a nearest lot");
      }
    }
  }
}

double walking_time_to(const Instance& instance, std::size_t driver, std::size_t lot) {
  return walking_time(instance.trips[driver].destination, instance.lots[lot].location,
                      instance.walking_speed);
}

Assignment make_assignment(const Instance& instance, std::vector<int> dest_lot) {
  if (dest_lot.size() != instance.num_drivers())
    throw InstanceError("assignment size does not match driver count");
  Assignment a;
  a.beta.resize(dest_lot.size());
  for (std::size_t r = 0; r < dest_lot.size(); ++r) {
    if (dest_lot[r] < 0 || static_cast<std::size_t>(dest_lot[r]) >= instance.num_lots())
      throw InstanceError("assignment lot out of range for driver " + std::to_string(r));
    a.beta[r] = walking_time_to(instance, r, static_cast<std::size_t>(dest_lot[r]));
  }
  a.dest_lot = std::move(dest_lot);
  return a;
}

OccupancyLedger build_ledger(const Instance& instance, std::span<const int> dest_lot) {
  const std::size_t n_lots = instance.num_lots();
  OccupancyLedger ledger{PeriodGrid(n_lots, instance.horizon), PeriodGrid(n_lots, instance.horizon),
                         PeriodGrid(n_lots, instance.horizon)};
  for (std::size_t r = 0; r < instance.trips.size() && r < dest_lot.size(); ++r) {
    const Trip& trip = instance.trips[r];
    const int y = dest_lot[r];
    if (y >= 0 && static_cast<std::size_t>(y) < n_lots) ++ledger.arrivals.at(y, trip.end_period);
    ++ledger.departures.at(instance.origin_lot[r], trip.start_period);
  }
  for (std::size_t l = 0; l < n_lots; ++l) {
    ledger.occupancy.at(l, 0) = instance.lots[l].initial_occupancy;
    for (int t = 1; t <= instance.horizon; ++t) {
      ledger.occupancy.at(l, t) =
          ledger.occupancy.at(l, t - 1) + ledger.arrivals.at(l, t) - ledger.departures.at(l, t);
    }
  }
  return ledger;
}

FeasibilityReport check_feasible(const Instance& instance, std::span<const int> dest_lot) {
  FeasibilityReport report;
  if (dest_lot.size() != instance.num_drivers()) {
    std::ostringstream os;
    os << "assignment has " << dest_lot.size() << " entries for " << instance.num_drivers()
       << " drivers";
    report.assignment_errors.push_back(os.str());
  }
  for (std::size_t r = 0; r < dest_lot.size(); ++r) {
    if (dest_lot[r] < 0 || static_cast<std::size_t>(dest_lot[r]) >= instance.num_lots()) {
      report.assignment_errors.push_back("driver " + std::to_string(r) + " has no valid lot");
    }
  }
  const OccupancyLedger ledger = build_ledger(instance, dest_lot);
  for (std::size_t l = 0; l < instance.num_lots(); ++l) {
    const int cap = instance.lots[l].capacity;
    for (int t = 1; t <= instance.horizon; ++t) {
      const int x = ledger.occupancy.at(l, t);
      if (x > cap) report.violations.push_back({static_cast<int>(l), t, x, cap});
      if (x < 0) report.negative_occupancy.push_back({static_cast<int>(l), t, x, cap});
    }
  }
  report.feasible = report.violations.empty() && report.assignment_errors.empty();
  return report;
}

}  // namespace fairpark
