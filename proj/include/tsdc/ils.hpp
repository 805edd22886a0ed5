#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "tsdc/mdp.hpp"
#include "tsdc/schedule.hpp"

namespace tsdc {

struct SolverConfig {
  int stall_limit = 15;            // consecutive non-improving rounds before stopping
  double wall_clock_limit = 1800.0; // seconds
  std::uint64_t seed = 0;
  int per_ap_cap = 31;             // max collection slots per AP
  std::vector<int> oropt_lengths = {1, 2, 3};
};

struct SolverResult {
  Schedule best;
  Evaluation best_eval;
  long long iterations = 0; // perturbation rounds executed
  double wall_seconds = 0.0;
  std::vector<std::pair<long long, double>> improvement_log; // (round, objective)
};

// Deadline-ordered visiting cycle: the response queue order.
std::vector<int> shortest_time_cycle(const Instance& inst);

// Constructive start: repeatedly place the AP with the best
// 1 / (queue-position * insertion-delay) score, appending when it can still
// be reached in time, otherwise inserting wherever no already-placed AP
// flips state, otherwise appending flagged late. Durations then come from
// the duration DP under the route's service budget, so the result always
// passes feasibility_report.
Schedule initialize(const Instance& inst, int per_ap_cap = 31);

// Removes |V|/10 + 1 random visited APs, reinserts each at a random
// position and rescores with the DP. Returns the move only if it is
// energy-feasible and at least as good as `current`.
std::optional<Schedule> perturb(const Instance& inst, const Schedule& current,
                                std::mt19937_64& rng, int per_ap_cap = 31);

// Best-improvement descent over 2-opt, swap and or-opt (segment lengths as
// configured), every candidate route rescored with the duration DP; loops
// until no neighborhood improves.
Schedule local_search(const Instance& inst, const Schedule& start, int per_ap_cap = 31,
                      const std::vector<int>& oropt_lengths = {1, 2, 3});

// Full iterated local search, deterministic in cfg.seed.
SolverResult solve(const Instance& inst, const SolverConfig& cfg = {});

std::string solver_result_to_json(const SolverResult& res, bool include_wall = true,
                                  int indent = -1);

} // namespace tsdc
