#pragma once

#include <span>
#include <vector>

#include "tsdc/schedule.hpp"

namespace tsdc {

// Benefit table for the duration DP over a fixed route. Stage k is the k-th
// visited AP, column j the exact number of service slots consumed by stages
// 1..k. Cells unreachable by any admissible duration chain carry the
// sentinel (trace -2); the answer is the best cell in the last row over
// j <= budget.
struct DpTables {
  int stages = 0;
  int budget = 0;
  // per cell: accumulated collected / overflowed data along the best chain
  std::vector<double> collected;
  std::vector<double> overflowed;
  std::vector<int> trace; // duration chosen at this cell, -2 = unreachable

  std::size_t idx(int k, int j) const {
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(budget + 1) +
           static_cast<std::size_t>(j);
  }
  bool reachable(int k, int j) const { return trace[idx(k, j)] != -2; }
};

struct DurationAssignment {
  std::vector<int> durations;
  double total_benefit = 0.0; // equals evaluate() objective on (route, durations)
};

// A candidate duration is admissible if it is zero, or the visit drains the
// buffer to the threshold (buffer + d*(growth - rate) <= threshold), or the
// link cannot outrun the growth at all (rate <= growth, the AP is visitable
// but not drainable).
bool duration_admissible(const ApKinetics& ap, long long arrival, int duration);

// Optimal per-AP collection durations for a fixed route under a total
// service budget and per-AP cap. Arrival bookkeeping inside the table is
// cumulative flight plus the predecessors' consumed slots, so the traced
// assignment scores identically under evaluate(). Ties prefer the smaller
// duration, then the smaller total consumption.
DurationAssignment solve_dcdsp(const Instance& inst, std::span<const int> route_aps,
                               int budget_slots, int per_ap_cap,
                               DpTables* tables_out = nullptr);

// Benefit (collected - penalty * overflow) of a route prefix with fixed
// durations; matches evaluate() on the induced partial schedule.
double score_prefix(const Instance& inst, std::span<const int> route_prefix,
                    std::span<const int> durations_prefix);

} // namespace tsdc
