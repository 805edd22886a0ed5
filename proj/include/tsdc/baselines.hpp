#pragma once

#include "tsdc/schedule.hpp"

namespace tsdc {

struct OracleResult {
  Schedule best;
  double objective = 0.0;
  long long nodes_explored = 0;
};

// Exact optimum by enumerating every subset and ordering of the APs and,
// per route, every admissible duration vector within the service budget
// (plain recursion, deliberately not the DP). Ties resolve
// lexicographically on route, then durations. Caps at 7 APs.
OracleResult brute_force(const Instance& inst, int max_n = 7, int per_ap_cap = 31);

// Queue-order route, each AP served just long enough to drain to its
// threshold, truncated when energy or mission time runs out. Always
// feasible.
Schedule greedy_deadline(const Instance& inst, int per_ap_cap = 31);

// Queue-order route with one constant duration per AP, truncated to the
// budget.
Schedule uniform_duration(const Instance& inst, int duration);

} // namespace tsdc
