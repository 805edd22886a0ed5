#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsdc/ils.hpp"
#include "tsdc/schedule.hpp"

namespace tsdc {

struct BenchRecord {
  std::string instance_name;
  std::string algorithm;
  std::uint64_t seed = 0;
  double objective = 0.0;
  double collected = 0.0;
  double overflow = 0.0;
  double efficiency = 0.0; // eta
  double time_ratio = 0.0; // mu
  long long flight_slots = 0;
  long long service_slots = 0;
  double wall_seconds = 0.0;
};

// eta = C / (C + O), defined as 1 when there was nothing to collect or
// lose; mu = service / (service + flight), 0 on an empty tour.
std::pair<double, double> metrics(const Evaluation& ev);

// Two-sided rank-sum p-value. Small pooled samples (subset count up to
// 200000, which covers 10-vs-10) go through exact enumeration of the
// rank-sum distribution with midranks; larger ones use the normal
// approximation with tie and continuity corrections.
double wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

struct BenchOptions {
  std::vector<std::string> algorithms = {"ils-mdp", "greedy", "uniform"};
  int runs = 10;
  std::uint64_t seed = 1;
  int uniform_d = 5;
  int threads = 0; // 0 = hardware concurrency
  SolverConfig solver;
};

// Runs every (instance, algorithm, run) task, fanning out across worker
// threads; per-run seeds are fixed up front so the records are identical
// regardless of scheduling. Output sorted by (instance, algorithm, seed).
std::vector<BenchRecord> run_bench(const std::vector<std::pair<std::string, Instance>>& suite,
                                   const BenchOptions& opts);

// CSV with the BenchRecord fields in declaration order.
std::string records_to_csv(const std::vector<BenchRecord>& records);
std::vector<BenchRecord> records_from_csv(const std::string& text);
std::string records_to_json(const std::vector<BenchRecord>& records, int indent = -1);

struct StatPair {
  std::string instance_name;
  std::string algorithm_a;
  std::string algorithm_b;
  double p_value = 1.0;
  bool significant = false; // at alpha = 0.05
};

// Pairwise rank-sum tests of the objective samples, per instance.
std::vector<StatPair> stat_report(const std::vector<BenchRecord>& records, double alpha = 0.05);
std::string stat_report_to_json(const std::vector<StatPair>& pairs, int indent = -1);

// Route geometry document for plotting: AP coordinates, visit order,
// arrival slots and states, and the tour polyline.
std::string plot_data(const Instance& inst, const Schedule& sched, const Evaluation& ev,
                      int indent = -1);
std::string plot_svg(const Instance& inst, const Schedule& sched);

} // namespace tsdc
