#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairpark {

// Planar point in miles.
struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline double l1_distance(Point a, Point b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

// Periods are 1-based (1..horizon); lot and driver indices are 0-based.
struct Trip {
  int id = 0;
  Point origin;
  Point destination;
  int start_period = 1;
  int end_period = 1;
  friend bool operator==(const Trip&, const Trip&) = default;
};

struct Lot {
  int id = 0;
  Point location;
  int capacity = 0;
  int initial_occupancy = 0;
  friend bool operator==(const Lot&, const Lot&) = default;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  std::vector<Trip> trips;
  std::vector<Lot> lots;
  int horizon = 24;
  double walking_speed = 3.10686;  // 5 km/h in miles per hour
  std::vector<int> origin_lot;     // lot each driver's vehicle leaves from

  std::size_t num_drivers() const { return trips.size(); }
  std::size_t num_lots() const { return lots.size(); }
  friend bool operator==(const Instance&, const Instance&) = default;
};

// Builds an instance and fills origin_lot with the nearest lot to each origin.
Instance make_instance(std::vector<Trip> trips, std::vector<Lot> lots, int horizon,
                       double walking_speed);

// Throws InstanceError describing the first broken invariant.
void validate(const Instance& instance);

struct Assignment {
  std::vector<int> dest_lot;
  std::vector<double> beta;  // hours
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Attaches walking times to a lot choice.
Assignment make_assignment(const Instance& instance, std::vector<int> dest_lot);

// Walking time in hours if driver r parks in lot l.
double walking_time_to(const Instance& instance, std::size_t driver, std::size_t lot);

// Dense lots x (horizon + 1) integer table; column 0 is time zero.
class PeriodGrid {
 public:
  PeriodGrid() = default;
  PeriodGrid(std::size_t lots, int horizon)
      : lots_(lots), horizon_(horizon), cells_(lots * static_cast<std::size_t>(horizon + 1), 0) {}

  int& at(std::size_t lot, int t) { return cells_[index(lot, t)]; }
  int at(std::size_t lot, int t) const { return cells_[index(lot, t)]; }

  std::size_t lots() const { return lots_; }
  int horizon() const { return horizon_; }
  friend bool operator==(const PeriodGrid&, const PeriodGrid&) = default;

 private:
  std::size_t index(std::size_t lot, int t) const {
    if (lot >= lots_ || t < 0 || t > horizon_) throw std::out_of_range("PeriodGrid index");
    return lot * static_cast<std::size_t>(horizon_ + 1) + static_cast<std::size_t>(t);
  }

  std::size_t lots_ = 0;
  int horizon_ = 0;
  std::vector<int> cells_;
};

struct OccupancyLedger {
  PeriodGrid arrivals;    // Y
  PeriodGrid departures;  // Z
  PeriodGrid occupancy;   // x, with x(0) from the instance
};

// Nearest lot (L1) to each trip origin; ties go to the lowest lot index.
std::vector<int> compute_origin_lots(std::span<const Trip> trips, std::span<const Lot> lots);

OccupancyLedger build_ledger(const Instance& instance, std::span<const int> dest_lot);

struct Violation {
  int lot = 0;
  int period = 0;
  int occupancy = 0;
  int capacity = 0;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;           // x > capacity
  std::vector<std::string> assignment_errors;  // wrong size or lot out of range
  std::vector<Violation> negative_occupancy;   // warnings only
};

FeasibilityReport check_feasible(const Instance& instance, std::span<const int> dest_lot);

}  // namespace fairpark
