#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "fairpark/io.hpp"
#include "fairpark/model.hpp"
#include "test_support.hpp"

using namespace fairpark;

TEST_CASE("origin lots: unique nearest and tie to lowest index") {
  std::vector<Lot> lots{{0, {1, 0}, 1, 0}, {1, {5, 5}, 1, 0}};
  std::vector<Trip> trips{{0, {0, 0}, {0, 0}, 1, 1}};
  CHECK(compute_origin_lots(trips, lots) == std::vector<int>{0});

  std::vector<Lot> tied{{0, {1, 0}, 1, 0}, {1, {0, 1}, 1, 0}};
  CHECK(compute_origin_lots(trips, tied) == std::vector<int>{0});
  std::vector<Lot> tied_rev{tied[1], tied[0]};
  CHECK(compute_origin_lots(trips, tied_rev) == std::vector<int>{0});

  CHECK_THROWS_AS(compute_origin_lots(trips, std::vector<Lot>{}), InstanceError);
}

TEST_CASE("origin lots match exhaustive nearest scan and are permutation-equivariant") {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Lot> lots;
    for (int l = 0; l < 5; ++l) lots.push_back({l, {rng.uniform(-3, 3), rng.uniform(-3, 3)}, 2, 0});
    std::vector<Trip> trips;
    for (int r = 0; r < 20; ++r) trips.push_back({r, {rng.uniform(-3, 3), rng.uniform(-3, 3)}, {}, 1, 1});
    const auto z = compute_origin_lots(trips, lots);
    for (int r = 0; r < 20; ++r) CHECK(z[r] == testing::nearest_lot_oracle(trips[r].origin, lots));
    CHECK(compute_origin_lots(trips, lots) == z);

    // Distinct real coordinates have no ties, so permuting lots permutes labels.
    std::vector<int> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    std::vector<Lot> permuted;
    for (int p : perm) permuted.push_back(lots[p]);
    const auto zp = compute_origin_lots(trips, permuted);
    for (int r = 0; r < 20; ++r) CHECK(perm[zp[r]] == z[r]);
  }
}

TEST_CASE("ledger for a single driver") {
  std::vector<Lot> lots{{0, {0, 0}, 1, 1}, {1, {10, 0}, 1, 0}};
  std::vector<Trip> trips{{0, {0, 0}, {10, 0}, 1, 3}};
  const Instance inst = make_instance(trips, lots, 5, 5.0);
  REQUIRE(inst.origin_lot == std::vector<int>{0});
  const auto ledger = build_ledger(inst, std::vector<int>{1});
  for (int t = 1; t <= 5; ++t) CHECK(ledger.occupancy.at(0, t) == 0);
  CHECK(ledger.occupancy.at(1, 1) == 0);
  CHECK(ledger.occupancy.at(1, 2) == 0);
  for (int t = 3; t <= 5; ++t) CHECK(ledger.occupancy.at(1, t) == 1);
}

TEST_CASE("ledger with no trips is constant") {
  const Instance inst = make_instance({}, {{0, {0, 0}, 4, 2}, {1, {1, 1}, 3, 3}}, 6, 5.0);
  const auto ledger = build_ledger(inst, std::vector<int>{});
  for (int t = 0; t <= 6; ++t) {
    CHECK(ledger.occupancy.at(0, t) == 2);
    CHECK(ledger.occupancy.at(1, t) == 3);
  }
}

TEST_CASE("ledger recurrence and totals against an independent recount") {
  Rng rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const Instance inst = testing::random_tiny_instance(rng, {10, 3, 6, 4});
    std::vector<int> dest(inst.num_drivers());
    for (auto& d : dest) d = static_cast<int>(rng.uniform_int(0, inst.num_lots() - 1));
    const auto ledger = build_ledger(inst, dest);
    int total_y = 0;
    int total_z = 0;
    for (std::size_t l = 0; l < inst.num_lots(); ++l) {
      for (int t = 1; t <= inst.horizon; ++t) {
        total_y += ledger.arrivals.at(l, t);
        total_z += ledger.departures.at(l, t);
        CHECK(ledger.occupancy.at(l, t) ==
              ledger.occupancy.at(l, t - 1) + ledger.arrivals.at(l, t) - ledger.departures.at(l, t));
        CHECK(ledger.occupancy.at(l, t) == testing::occupancy_recount(inst, dest, static_cast<int>(l), t));
      }
    }
    CHECK(total_y == static_cast<int>(inst.num_drivers()));
    CHECK(total_z == static_cast<int>(inst.num_drivers()));
  }
}

TEST_CASE("feasibility: capacity violation is listed") {
  std::vector<Lot> lots{{0, {0, 0}, 1, 0}, {1, {50, 50}, 5, 0}};
  // Both vehicles depart from lot 1 (far away), both arrive in lot 0 at t=2.
  std::vector<Trip> trips{{0, {50, 50}, {0, 0}, 1, 2}, {1, {50, 50}, {0, 0}, 1, 2}};
  const Instance inst = make_instance(trips, lots, 3, 5.0);
  const auto rep = check_feasible(inst, std::vector<int>{0, 0});
  CHECK_FALSE(rep.feasible);
  REQUIRE(rep.violations.size() >= 1);
  CHECK(rep.violations.front() == Violation{0, 2, 2, 1});
  CHECK(check_feasible(inst, std::vector<int>{0, 1}).feasible);
}

TEST_CASE("feasibility: no drivers is feasible, malformed assignment is not") {
  const Instance inst = make_instance({}, {{0, {0, 0}, 0, 0}}, 2, 5.0);
  CHECK(check_feasible(inst, std::vector<int>{}).feasible);

  const Instance one = make_instance({{0, {0, 0}, {0, 0}, 1, 1}}, {{0, {0, 0}, 1, 0}}, 2, 5.0);
  CHECK_FALSE(check_feasible(one, std::vector<int>{}).feasible);
  CHECK_FALSE(check_feasible(one, std::vector<int>{3}).feasible);
}

TEST_CASE("feasibility: negative occupancy is a warning, not a violation") {
  // A vehicle leaves an empty lot before any arrival.
  std::vector<Lot> lots{{0, {0, 0}, 2, 0}};
  std::vector<Trip> trips{{0, {0, 0}, {0, 0}, 1, 3}};
  const Instance inst = make_instance(trips, lots, 3, 5.0);
  const auto rep = check_feasible(inst, std::vector<int>{0});
  CHECK(rep.feasible);
  CHECK(rep.negative_occupancy.size() == 2);
}

TEST_CASE("feasibility agrees with the constraint-recheck oracle") {
  Rng rng(17);
  int infeasible = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const Instance inst = testing::random_tiny_instance(rng);
    std::vector<int> dest(inst.num_drivers());
    for (auto& d : dest) d = static_cast<int>(rng.uniform_int(0, inst.num_lots() - 1));
    const bool expected = testing::feasible_oracle(inst, dest);
    CHECK(check_feasible(inst, dest).feasible == expected);
    infeasible += expected ? 0 : 1;
  }
  CHECK(infeasible > 0);
}

TEST_CASE("instance validation rejects broken invariants") {
  CHECK_THROWS_AS(make_instance({}, {{0, {0, 0}, 1, 2}}, 2, 5.0), InstanceError);
  CHECK_THROWS_AS(make_instance({{0, {0, 0}, {0, 0}, 0, 1}}, {{0, {0, 0}, 1, 0}}, 2, 5.0), InstanceError);
  CHECK_THROWS_AS(make_instance({{0, {0, 0}, {0, 0}, 1, 3}}, {{0, {0, 0}, 1, 0}}, 2, 5.0), InstanceError);
  CHECK_THROWS_AS(make_instance({}, {{0, {0, 0}, 1, 0}}, 2, 0.0), InstanceError);
}

TEST_CASE("instance JSON round trip is stable") {
  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    Instance inst = testing::random_tiny_instance(rng);
    for (auto& t : inst.trips) t.destination.x += rng.uniform01() / 3.0;
    const auto doc = to_json(inst);
    const Instance back = instance_from_json(doc);
    CHECK(back == inst);
    CHECK(to_json(back).dump() == doc.dump());
  }
  CHECK_THROWS_AS(instance_from_json(nlohmann::json::parse(R"({"horizon": 3})")), InstanceError);
}
