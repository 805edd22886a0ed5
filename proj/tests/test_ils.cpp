#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "tsdc/ils.hpp"
#include "tsdc/physics.hpp"

using namespace tsdc;

namespace {

// Four APs on a square, base in the middle, zero growth (no deadlines) and a
// battery tight enough that flight waste turns into lost collection.
Instance square_instance() {
  Instance inst;
  inst.name = "square";
  inst.base = {50, 50};
  inst.penalty = 15.0;
  inst.uav.speed = 10;
  inst.uav.mission_slots = 500;
  inst.uav.slot_length = 1;
  const Location corners[4] = {{0, 0}, {100, 0}, {100, 100}, {0, 100}};
  for (int i = 0; i < 4; ++i) {
    AccessPoint ap;
    ap.id = i + 1;
    ap.location = corners[i];
    ap.growth_rate = 0;
    ap.initial_data = 6000;
    ap.capacity = 10000;
    ap.threshold = 5000;
    ap.tx_power = 3; // rate 2000 per slot
    inst.aps.push_back(ap);
  }
  // budget: the perimeter tour plus a dozen hover slots
  const auto perimeter = physics::route_flight_cost(inst, std::vector<int>{1, 2, 3, 4});
  const double fly_e = physics::propulsion_power(inst.uav.energy, 10.0);
  const double hover_e = physics::propulsion_power(inst.uav.energy, 0.0);
  inst.uav.battery = fly_e * static_cast<double>(perimeter.slots) + hover_e * 12.0;
  validate_instance(inst);
  return inst;
}

} // namespace

TEST_CASE("shortest time cycle is the response queue") {
  const Instance inst = testing::small_instance(8, 5);
  CHECK(shortest_time_cycle(inst) == build_queue(inst));
  Instance empty;
  empty.uav.battery = 1;
  empty.uav.mission_slots = 1;
  CHECK(shortest_time_cycle(empty).empty());
}

TEST_CASE("initialize handles the empty instance") {
  Instance empty;
  empty.uav.battery = 1000;
  empty.uav.mission_slots = 10;
  const Schedule s = initialize(empty);
  CHECK(s.visit_count() == 0);
  CHECK(evaluate(empty, s).objective == 0.0);
}

TEST_CASE("initialize visits a lone reachable ap in time") {
  Instance inst;
  inst.base = {0, 0};
  inst.penalty = 15.0;
  inst.uav.speed = 10;
  inst.uav.battery = 1e5;
  inst.uav.mission_slots = 1000;
  AccessPoint ap;
  ap.id = 1;
  ap.location = {100, 0};
  ap.growth_rate = 2;
  ap.initial_data = 90;
  ap.capacity = 400;
  ap.threshold = 80;
  ap.tx_power = 3;
  inst.aps.push_back(ap);

  const Schedule s = initialize(inst);
  REQUIRE(s.route == std::vector<int>{0, 1, 0});
  const Evaluation ev = evaluate(inst, s);
  CHECK(ev.state == std::vector<int>{0});
  CHECK(ev.feasible);
}

TEST_CASE("initialize prefers the order with less overflow") {
  // near AP with a late deadline, far AP with an early one; the score picks
  // the near AP first, so the far one has to be inserted ahead of it to
  // stay alive
  Instance inst;
  inst.base = {0, 0};
  inst.penalty = 15.0;
  inst.uav.speed = 10;
  inst.uav.battery = 1e6;
  inst.uav.mission_slots = 2000;
  AccessPoint near_ap;
  near_ap.id = 1;
  near_ap.location = {20, 0};
  near_ap.growth_rate = 1;
  near_ap.initial_data = 100;
  near_ap.capacity = 2000; // headroom 1900 slots
  near_ap.threshold = 100;
  near_ap.tx_power = 3;
  AccessPoint far_ap = near_ap;
  far_ap.id = 2;
  far_ap.location = {200, 0};
  far_ap.capacity = 124; // headroom 24 slots, only reachable if served first
  inst.aps.push_back(near_ap);
  inst.aps.push_back(far_ap);
  validate_instance(inst);

  const Schedule s = initialize(inst);
  const Evaluation ev = evaluate(inst, s);
  CHECK(ev.total_overflow == 0.0);
  CHECK(ev.feasible);
}

TEST_CASE("initialized schedules pass the feasibility report") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const Instance inst = testing::small_instance(6 + static_cast<int>(seed % 5), seed);
    CHECK(feasibility_report(inst, initialize(inst)).empty());
  }
}

TEST_CASE("perturb keeps a single-visit route and accepts the tie") {
  const Instance inst = testing::small_instance(1, 3);
  const Schedule start = initialize(inst);
  REQUIRE(start.visit_count() == 1);
  std::mt19937_64 rng(9);
  const auto moved = perturb(inst, start, rng);
  REQUIRE(moved.has_value());
  CHECK(moved->route == start.route);
}

TEST_CASE("perturb is deterministic under a fixed seed and stays feasible") {
  const Instance inst = testing::small_instance(8, 17);
  const Schedule start = initialize(inst);
  std::mt19937_64 a(123), b(123);
  const auto first = perturb(inst, start, a);
  const auto second = perturb(inst, start, b);
  CHECK(first.has_value() == second.has_value());
  if (first && second) CHECK(*first == *second);

  std::mt19937_64 rng(31);
  int accepted = 0;
  const double base_obj = evaluate(inst, start).objective;
  for (int i = 0; i < 100; ++i) {
    const auto moved = perturb(inst, start, rng);
    if (!moved) continue;
    ++accepted;
    CHECK(feasibility_report(inst, *moved).empty());
    CHECK(evaluate(inst, *moved).objective >= base_obj);
  }
  CHECK(accepted > 0);
}

TEST_CASE("local search leaves a single-visit route unchanged") {
  const Instance inst = testing::small_instance(1, 3);
  const Schedule start = initialize(inst);
  const Schedule improved = local_search(inst, start);
  CHECK(improved.route == start.route);
}

TEST_CASE("local search uncrosses a square tour") {
  const Instance inst = square_instance();
  Schedule crossed;
  crossed.route = {0, 1, 3, 2, 4, 0}; // both diagonals crossed
  const std::vector<int> crossed_interior = {1, 3, 2, 4};
  const auto flight = physics::route_flight_cost(inst, crossed_interior);
  const int budget = physics::service_budget(inst, flight.energy, flight.slots);
  crossed.durations = solve_dcdsp(inst, crossed_interior, budget, 31).durations;
  REQUIRE(feasibility_report(inst, crossed).empty());

  const double before = evaluate(inst, crossed).objective;
  const Schedule improved = local_search(inst, crossed);
  const double after = evaluate(inst, improved).objective;
  CHECK(after > before);

  // perimeter order in some rotation/reflection: no diagonal hops remain
  std::vector<int> tour(improved.route.begin() + 1, improved.route.end() - 1);
  REQUIRE(tour.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const int a = tour[k], b = tour[(k + 1) % 4];
    CHECK(std::abs(a - b) != 2);
  }
}

TEST_CASE("local search is idempotent in objective") {
  const Instance inst = testing::small_instance(7, 23);
  const Schedule start = initialize(inst);
  const Schedule once = local_search(inst, start);
  const Schedule twice = local_search(inst, once);
  CHECK(evaluate(inst, once).objective == evaluate(inst, twice).objective);
}

TEST_CASE("solve is deterministic and logs strictly improving objectives") {
  const Instance inst = testing::small_instance(7, 29);
  SolverConfig cfg;
  cfg.seed = 42;
  cfg.stall_limit = 6;
  const SolverResult a = solve(inst, cfg);
  const SolverResult b = solve(inst, cfg);
  CHECK(solver_result_to_json(a, false) == solver_result_to_json(b, false));
  CHECK(a.best == b.best);
  for (std::size_t k = 1; k < a.improvement_log.size(); ++k)
    CHECK(a.improvement_log[k].second > a.improvement_log[k - 1].second);
  CHECK(feasibility_report(inst, a.best).empty());
}

TEST_CASE("solve on an empty instance returns the empty tour") {
  Instance empty;
  empty.uav.battery = 1000;
  empty.uav.mission_slots = 10;
  SolverConfig cfg;
  cfg.stall_limit = 2;
  const SolverResult res = solve(empty, cfg);
  CHECK(res.best_eval.objective == 0.0);
  CHECK(res.best.visit_count() == 0);
}
