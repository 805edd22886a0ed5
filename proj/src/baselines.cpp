#include "tsdc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tsdc/mdp.hpp"
#include "tsdc/physics.hpp"

namespace tsdc {

namespace {

struct Enumerator {
  const Instance& inst;
  int cap;
  std::vector<int> route;          // current permutation (AP ids)
  std::vector<long long> cum_flight; // arrival-base flight per stage
  std::vector<const ApKinetics*> kin;
  int budget = 0;

  std::vector<int> durations;
  std::vector<int> best_durations;
  double best_value;
  bool any = false;
  long long leaves = 0;

  // Depth-first over duration vectors with running (collected, overflowed)
  // accumulated in route order, mirroring the evaluator's arithmetic.
  void walk(int k, int used, double collected, double overflowed) {
    if (k == static_cast<int>(route.size())) {
      ++leaves;
      const double value = collected - inst.penalty * overflowed;
      if (!any || value > best_value ||
          (value == best_value && durations < best_durations)) {
        any = true;
        best_value = value;
        best_durations = durations;
      }
      return;
    }
    const auto& ap = *kin[static_cast<std::size_t>(k)];
    const long long t = cum_flight[static_cast<std::size_t>(k)] + used;
    const double buffer = ap.buffer_at(t);
    const double o = overflowed + ap.overflow_by(t);
    const int dmax = std::min(cap, budget - used);
    for (int d = 0; d <= dmax; ++d) {
      if (!duration_admissible(ap, t, d)) continue;
      durations[static_cast<std::size_t>(k)] = d;
      walk(k + 1, used + d, collected + ap.collected(d, buffer), o);
    }
    durations[static_cast<std::size_t>(k)] = 0;
  }
};

bool lex_less(const Schedule& a, const Schedule& b) {
  if (a.route != b.route) return a.route < b.route;
  return a.durations < b.durations;
}

} // namespace

OracleResult brute_force(const Instance& inst, int max_n, int per_ap_cap) {
  const int n = inst.ap_count();
  const int hard_cap = std::min(max_n, 7);
  if (n > hard_cap)
    throw std::invalid_argument("brute_force handles at most " + std::to_string(hard_cap) +
                                " APs, got " + std::to_string(n));

  OracleResult res;
  res.best = Schedule{}; // skip everything
  res.objective = 0.0;

  std::vector<ApKinetics> kin_by_id(static_cast<std::size_t>(n) + 1);
  for (const auto& ap : inst.aps)
    kin_by_id[static_cast<std::size_t>(ap.id)] = compute_kinetics(inst, ap);

  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) subset.push_back(i + 1);
    std::sort(subset.begin(), subset.end());
    do {
      const auto flight = physics::route_flight_cost(inst, subset);
      if (flight.slots > inst.uav.mission_slots || flight.energy > inst.uav.battery) continue;

      Enumerator en{inst, per_ap_cap};
      en.route = subset;
      en.budget = physics::service_budget(inst, flight.energy, flight.slots);
      en.cum_flight.resize(subset.size());
      long long acc = 0;
      int prev = 0;
      for (std::size_t k = 0; k < subset.size(); ++k) {
        acc += physics::flight_slots(inst.node_location(prev), inst.node_location(subset[k]),
                                     inst.uav.speed, inst.uav.slot_length);
        en.cum_flight[k] = acc;
        prev = subset[k];
      }
      for (int id : subset) en.kin.push_back(&kin_by_id[static_cast<std::size_t>(id)]);
      en.durations.assign(subset.size(), 0);
      en.walk(0, 0, 0.0, 0.0);
      res.nodes_explored += en.leaves;
      if (!en.any) continue;

      Schedule cand;
      cand.route.clear();
      cand.route.push_back(0);
      cand.route.insert(cand.route.end(), subset.begin(), subset.end());
      cand.route.push_back(0);
      cand.durations = en.best_durations;
      if (en.best_value > res.objective ||
          (en.best_value == res.objective && lex_less(cand, res.best))) {
        res.objective = en.best_value;
        res.best = cand;
      }
    } while (std::next_permutation(subset.begin(), subset.end()));
  }
  return res;
}

namespace {

// Appends queue APs while the route (including the return leg) still fits
// the battery and the mission; stops at the first AP that does not.
Schedule truncated_queue_schedule(const Instance& inst,
                                  const std::vector<int>& queue,
                                  auto&& duration_for) {
  const double fly_power = physics::propulsion_power(inst.uav.energy, inst.uav.speed);
  const double hover_power = physics::propulsion_power(inst.uav.energy, 0.0);

  std::vector<int> interior;
  std::vector<int> durations;
  std::vector<ApKinetics> kin_by_id(static_cast<std::size_t>(inst.ap_count()) + 1);
  for (const auto& ap : inst.aps)
    kin_by_id[static_cast<std::size_t>(ap.id)] = compute_kinetics(inst, ap);

  long long clock = 0;
  long long service = 0;
  int prev = 0;
  for (int id : queue) {
    const int fly = physics::flight_slots(inst.node_location(prev), inst.node_location(id),
                                          inst.uav.speed, inst.uav.slot_length);
    const long long arrival = clock + fly;
    const int d = duration_for(kin_by_id[static_cast<std::size_t>(id)], arrival);
    const int back = physics::flight_slots(inst.node_location(id), inst.node_location(0),
                                           inst.uav.speed, inst.uav.slot_length);

    long long flight_slots = 0;
    int p2 = 0;
    for (int v : interior) {
      flight_slots += physics::flight_slots(inst.node_location(p2), inst.node_location(v),
                                            inst.uav.speed, inst.uav.slot_length);
      p2 = v;
    }
    flight_slots += fly + back;
    const long long total_service = service + d;
    const long long total_slots = flight_slots + total_service;
    const double energy =
        fly_power * inst.uav.slot_length * static_cast<double>(flight_slots) +
        hover_power * inst.uav.slot_length * static_cast<double>(total_service);
    if (total_slots > inst.uav.mission_slots || energy > inst.uav.battery) break;

    interior.push_back(id);
    durations.push_back(d);
    clock = arrival + d;
    service = total_service;
    prev = id;
  }

  Schedule out;
  out.route.clear();
  out.route.push_back(0);
  out.route.insert(out.route.end(), interior.begin(), interior.end());
  out.route.push_back(0);
  out.durations = std::move(durations);
  return out;
}

} // namespace

Schedule greedy_deadline(const Instance& inst, int per_ap_cap) {
  const auto queue = build_queue(inst);
  return truncated_queue_schedule(inst, queue, [&](const ApKinetics& ap, long long arrival) {
    if (ap.rate_per_slot <= ap.growth_per_slot) return per_ap_cap;
    const double need = ap.buffer_at(arrival) - ap.threshold;
    if (need <= 0) return 0;
    const double d = std::ceil(need / (ap.rate_per_slot - ap.growth_per_slot));
    if (d >= static_cast<double>(inst.uav.mission_slots)) return inst.uav.mission_slots;
    return static_cast<int>(d);
  });
}

Schedule uniform_duration(const Instance& inst, int duration) {
  if (duration < 0) throw std::invalid_argument("duration must be nonnegative");
  const auto queue = build_queue(inst);
  return truncated_queue_schedule(
      inst, queue, [&](const ApKinetics&, long long) { return duration; });
}

} // namespace tsdc
