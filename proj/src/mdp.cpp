#include "tsdc/mdp.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "tsdc/physics.hpp"

namespace tsdc {

bool duration_admissible(const ApKinetics& ap, long long arrival, int duration) {
  if (duration == 0) return true;
  if (ap.rate_per_slot <= ap.growth_per_slot) return true;
  const double buffer = ap.buffer_at(arrival);
  const double after = buffer + static_cast<double>(duration) * ap.growth_per_slot -
                       static_cast<double>(duration) * ap.rate_per_slot;
  return after <= ap.threshold;
}

DurationAssignment solve_dcdsp(const Instance& inst, std::span<const int> route_aps,
                               int budget_slots, int per_ap_cap, DpTables* tables_out) {
  if (budget_slots < 0) throw std::invalid_argument("budget must be nonnegative");
  if (per_ap_cap < 1) throw std::invalid_argument("per-AP cap must be at least 1");
  const int n = static_cast<int>(route_aps.size());

  // More slots than every AP can absorb never help.
  const long long absorb = static_cast<long long>(n) * per_ap_cap;
  const int J = static_cast<int>(std::min<long long>(budget_slots, absorb));

  std::vector<ApKinetics> kin;
  std::vector<long long> cum_flight(static_cast<std::size_t>(n) + 1, 0);
  {
    int prev = 0;
    for (int k = 0; k < n; ++k) {
      const int id = route_aps[static_cast<std::size_t>(k)];
      kin.push_back(compute_kinetics(inst, inst.ap(id)));
      cum_flight[static_cast<std::size_t>(k) + 1] =
          cum_flight[static_cast<std::size_t>(k)] +
          physics::flight_slots(inst.node_location(prev), inst.node_location(id), inst.uav.speed,
                                inst.uav.slot_length);
      prev = id;
    }
  }

  DpTables local;
  DpTables& dp = tables_out ? *tables_out : local;
  dp.stages = n;
  dp.budget = J;
  const std::size_t cells = static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(J + 1);
  dp.collected.assign(cells, 0.0);
  dp.overflowed.assign(cells, 0.0);
  dp.trace.assign(cells, -2);
  dp.trace[dp.idx(0, 0)] = -1; // root: empty prefix, nothing consumed

  // Scratch per stage, indexed by the predecessors' consumption u = j - d:
  // buffer and overflow at arrival slot flight + u, plus per-duration pumped
  // volumes. Expressions stay byte-identical with ApKinetics' own.
  std::vector<double> buf_at(static_cast<std::size_t>(J) + 1);
  std::vector<double> ovf_at(static_cast<std::size_t>(J) + 1);
  std::vector<double> pumped(static_cast<std::size_t>(per_ap_cap) + 1);
  std::vector<double> grown(static_cast<std::size_t>(per_ap_cap) + 1);

  for (int k = 1; k <= n; ++k) {
    const auto& ap = kin[static_cast<std::size_t>(k - 1)];
    const long long flight = cum_flight[static_cast<std::size_t>(k)];
    const int jmax = static_cast<int>(std::min<long long>(
        J, static_cast<long long>(k) * per_ap_cap));
    for (int u = 0; u <= jmax; ++u) {
      const long long t = flight + u;
      buf_at[static_cast<std::size_t>(u)] = ap.buffer_at(t);
      ovf_at[static_cast<std::size_t>(u)] = ap.overflow_by(t);
    }
    const bool drainable = ap.rate_per_slot > ap.growth_per_slot;
    for (int d = 0; d <= per_ap_cap; ++d) {
      pumped[static_cast<std::size_t>(d)] = static_cast<double>(d) * ap.rate_per_slot;
      grown[static_cast<std::size_t>(d)] = static_cast<double>(d) * ap.growth_per_slot;
    }
    for (int j = 0; j <= jmax; ++j) {
      double best_value = -std::numeric_limits<double>::infinity();
      int best_d = -2;
      double best_c = 0.0, best_o = 0.0;
      const int dmax = std::min(per_ap_cap, j);
      for (int d = 0; d <= dmax; ++d) {
        const int u = j - d;
        const std::size_t prev = dp.idx(k - 1, u);
        if (dp.trace[prev] == -2) continue;
        const double buffer = buf_at[static_cast<std::size_t>(u)];
        const double pump = pumped[static_cast<std::size_t>(d)];
        if (d != 0 && drainable &&
            buffer + grown[static_cast<std::size_t>(d)] - pump > ap.threshold)
          continue;
        const double c = dp.collected[prev] + (pump < buffer ? pump : buffer);
        const double o = dp.overflowed[prev] + ovf_at[static_cast<std::size_t>(u)];
        const double value = c - inst.penalty * o;
        if (value > best_value) {
          best_value = value;
          best_d = d;
          best_c = c;
          best_o = o;
        }
      }
      if (best_d != -2) {
        const std::size_t cur = dp.idx(k, j);
        dp.trace[cur] = best_d;
        dp.collected[cur] = best_c;
        dp.overflowed[cur] = best_o;
      }
    }
  }

  // Best reachable final cell; equal values prefer the smaller consumption.
  int best_j = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= J; ++j) {
    if (!dp.reachable(n, j)) continue;
    const std::size_t c = dp.idx(n, j);
    const double value = dp.collected[c] - inst.penalty * dp.overflowed[c];
    if (value > best_value) {
      best_value = value;
      best_j = j;
    }
  }

  DurationAssignment out;
  out.durations.assign(static_cast<std::size_t>(n), 0);
  int j = best_j;
  for (int k = n; k >= 1; --k) {
    const int d = dp.trace[dp.idx(k, j)];
    out.durations[static_cast<std::size_t>(k - 1)] = d;
    j -= d;
  }
  const std::size_t final_cell = dp.idx(n, best_j);
  out.total_benefit = n == 0 ? 0.0
                             : dp.collected[final_cell] - inst.penalty * dp.overflowed[final_cell];
  return out;
}

double score_prefix(const Instance& inst, std::span<const int> route_prefix,
                    std::span<const int> durations_prefix) {
  if (route_prefix.size() != durations_prefix.size())
    throw std::invalid_argument("prefix lengths differ");
  long long clock = 0;
  int prev = 0;
  double collected = 0.0, overflowed = 0.0;
  for (std::size_t k = 0; k < route_prefix.size(); ++k) {
    const int id = route_prefix[k];
    clock += physics::flight_slots(inst.node_location(prev), inst.node_location(id),
                                   inst.uav.speed, inst.uav.slot_length);
    const ApKinetics ap = compute_kinetics(inst, inst.ap(id));
    collected += ap.collected(durations_prefix[k], ap.buffer_at(clock));
    overflowed += ap.overflow_by(clock);
    clock += durations_prefix[k];
    prev = id;
  }
  return collected - inst.penalty * overflowed;
}

} // namespace tsdc
