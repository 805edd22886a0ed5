#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tsdc/baselines.hpp"
#include "tsdc/instance.hpp"
#include "tsdc/mdp.hpp"
#include "tsdc/physics.hpp"
#include "tsdc/schedule.hpp"

namespace tsdc::testing {

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n));
}

inline double pick_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Small instance for equivalence and oracle tests: modest area, roomy
// horizon, battery scaled to leave a workable service budget.
inline Instance small_instance(int n_aps, std::uint64_t seed, double battery = 0.0,
                               Layout layout = Layout::Random) {
  GeneratorProfile p;
  p.area = 400.0;
  p.mission_slots = 600;
  p.battery = battery > 0 ? battery : 25000.0;
  return generate_instance(layout, n_aps, seed, p);
}

// A structurally valid random schedule: random subset, random order, random
// durations (not necessarily feasible or sensible).
inline Schedule random_schedule(const Instance& inst, std::mt19937_64& rng, int max_duration = 8) {
  std::vector<int> ids;
  for (const auto& ap : inst.aps) ids.push_back(ap.id);
  for (std::size_t k = ids.size(); k > 1; --k)
    std::swap(ids[k - 1], ids[pick(rng, k)]);
  const std::size_t take = pick(rng, ids.size() + 1);
  ids.resize(take);

  Schedule s;
  s.route.clear();
  s.route.push_back(0);
  s.route.insert(s.route.end(), ids.begin(), ids.end());
  s.route.push_back(0);
  for (std::size_t k = 0; k < take; ++k)
    s.durations.push_back(static_cast<int>(pick(rng, static_cast<std::size_t>(max_duration) + 1)));
  return s;
}

// Test-side duration optimizer: plain recursion over duration vectors with
// the same admissibility rule and benefit arithmetic as the DP's contract,
// written against the public kinetics helpers only.
struct EnumBest {
  double value = 0.0;
  std::vector<int> durations;
};

inline void enum_walk(const Instance& inst, const std::vector<ApKinetics>& kin,
                      const std::vector<long long>& cum_flight, int budget, int cap,
                      std::size_t k, int used, double collected, double overflowed,
                      std::vector<int>& cur, bool& any, EnumBest& best) {
  if (k == kin.size()) {
    const double value = collected - inst.penalty * overflowed;
    if (!any || value > best.value) {
      any = true;
      best.value = value;
      best.durations = cur;
    }
    return;
  }
  const auto& ap = kin[k];
  const long long t = cum_flight[k] + used;
  const double buffer = ap.buffer_at(t);
  const double over = overflowed + ap.overflow_by(t);
  for (int d = 0; d <= std::min(cap, budget - used); ++d) {
    if (!duration_admissible(ap, t, d)) continue;
    cur[k] = d;
    enum_walk(inst, kin, cum_flight, budget, cap, k + 1, used + d,
              collected + ap.collected(d, buffer), over, cur, any, best);
  }
  cur[k] = 0;
}

inline EnumBest enumerate_durations(const Instance& inst, const std::vector<int>& route_aps,
                                    int budget, int cap) {
  std::vector<ApKinetics> kin;
  std::vector<long long> cum_flight;
  long long acc = 0;
  int prev = 0;
  for (int id : route_aps) {
    kin.push_back(compute_kinetics(inst, inst.ap(id)));
    acc += physics::flight_slots(inst.node_location(prev), inst.node_location(id),
                                 inst.uav.speed, inst.uav.slot_length);
    cum_flight.push_back(acc);
    prev = id;
  }
  std::vector<int> cur(route_aps.size(), 0);
  bool any = false;
  EnumBest best;
  enum_walk(inst, kin, cum_flight, budget, cap, 0, 0, 0.0, 0.0, cur, any, best);
  if (!any) best.durations.assign(route_aps.size(), 0);
  return best;
}

// Second independent exact solver: enumerate (subset, order, durations) and
// score each complete schedule with simulate_slots only. Exponential, for
// tiny instances.
inline double simulate_only_brute(const Instance& inst, int cap) {
  const int n = inst.ap_count();
  double best = 0.0;
  std::vector<int> subset;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    subset.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) subset.push_back(i + 1);
    std::sort(subset.begin(), subset.end());
    do {
      const auto flight = physics::route_flight_cost(inst, subset);
      if (flight.slots > inst.uav.mission_slots || flight.energy > inst.uav.battery) continue;
      const int budget = physics::service_budget(inst, flight.energy, flight.slots);

      std::vector<int> durations(subset.size(), 0);
      // odometer over duration vectors
      while (true) {
        int used = 0;
        for (int d : durations) used += d;
        if (used <= budget) {
          Schedule s;
          s.route.clear();
          s.route.push_back(0);
          s.route.insert(s.route.end(), subset.begin(), subset.end());
          s.route.push_back(0);
          s.durations = durations;
          const auto ev = simulate_slots(inst, s);
          if (ev.feasible && ev.objective > best) best = ev.objective;
        }
        std::size_t pos = 0;
        while (pos < durations.size()) {
          if (durations[pos] < cap) {
            ++durations[pos];
            break;
          }
          durations[pos] = 0;
          ++pos;
        }
        if (pos == durations.size()) break;
      }
    } while (std::next_permutation(subset.begin(), subset.end()));
  }
  return best;
}

} // namespace tsdc::testing
